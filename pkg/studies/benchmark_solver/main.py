"""
Main entrypoint of the solver scaling benchmark

Factorizes and solves homogeneous cubic Helmholtz problems of growing size
at 4 points per wavelength and fits the growth exponents of the
factorization flops and the factor memory.

Functions
---------

main
    Main script to call
process
    Benchmark one factorization mode
"""

#
#                                                                       Modules
# =============================================================================

# Standard
from pathlib import Path
from typing import List

# Third-party
import hydra
import pandas as pd
from omegaconf import DictConfig

# Local
from horst import logger
from horst.cli import bench_scaling

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================


def process(config: DictConfig, variant: DictConfig) -> pd.DataFrame:
    """Benchmark one factorization mode over every grid size

    Parameters
    ----------
    config
        Hydra configuration file object
    variant
        mode and low-rank thresholds

    Returns
    -------
    pd.DataFrame
        fitted exponents, one row per threshold
    """
    output = Path.cwd() / variant.mode
    output.mkdir(exist_ok=True)

    _, exponents = bench_scaling(
        list(config.bench.n), [variant.mode], list(variant.eps),
        precision=config.bench.precision, threads=config.threads,
        deterministic=config.deterministic, nrhs=config.bench.nrhs,
        output=output / 'stats.csv')

    rows: List[dict] = [{'mode': mode, 'eps_blr': eps, **fits}
                        for (mode, eps), fits in exponents.items()]
    frame = pd.DataFrame(rows)
    frame.to_csv(output / 'exponents.csv', index=False)
    for row in rows:
        logger.info(f"{row['mode']} eps={row['eps_blr']}: flops ~ "
                    f"n^{row['flops_facto']:.2f}, memory ~ "
                    f"n^{row['mem_factors_bytes']:.2f}")
    return frame


@hydra.main(config_path=".", config_name="config")
def main(config):
    """Main script to call

    Parameters
    ----------
    config
        Configuration parameters defined in config.yaml
    """
    logger.setLevel(config.log_level)

    if config.hpc.jobid == -1:  # Sequential
        frames = [process(config, variant) for variant in config.variants]
        pd.concat(frames).to_csv(Path.cwd() / 'exponents.csv', index=False)

    elif config.hpc.jobid > 0:
        process(config, config.variants[config.hpc.jobid - 1])


if __name__ == "__main__":
    main()
