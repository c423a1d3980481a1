"""
Logging settings for the horst package.

Every module logs through the ``horst`` logger defined here. The
:class:`DistributedFileHandler` lets several processes (hydra multiruns,
parallel benchmark rows) share one log file.
"""
#                                                                       Modules
# =============================================================================

# Standard
import errno
import logging
import os
from logging import FileHandler, StreamHandler
from time import sleep

if os.name == 'nt':
    import msvcrt
else:
    import fcntl

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
RETRY_SECONDS = 0.2

logger = logging.getLogger("horst")

formatter = logging.Formatter(LOG_FORMAT)

handler = logging.StreamHandler()
handler.setFormatter(formatter)

logger.setLevel(logging.WARNING)
logger.addHandler(handler)


class DistributedFileHandler(FileHandler):
    def __init__(self, filename, mode: str = 'a'):
        """File handler that takes an exclusive lock on the log file for
        every record, so that concurrent processes can append to the same
        run log.

        Parameters
        ----------
        filename
            name of the logging file
        mode, optional
            file mode, by default 'a'
        """
        super().__init__(filename, mode=mode)
        self.setFormatter(formatter)

    def emit(self, record):
        while True:
            try:
                if self.stream is None:
                    self.stream = self._open()

                _lock_file(self.stream)
                try:
                    StreamHandler.emit(self, record)
                finally:
                    _unlock_file(self.stream)
                break

            except IOError as e:
                if e.errno in (errno.EAGAIN, errno.EACCES):
                    sleep(RETRY_SECONDS)
                else:
                    self.handleError(record)
                    break


def attach_file_handler(filename, level: int = logging.INFO
                        ) -> DistributedFileHandler:
    """Route the horst logger to ``filename`` as well

    Parameters
    ----------
    filename
        path of the log file, parent directories must exist
    level, optional
        level of the new handler, by default logging.INFO

    Returns
    -------
    DistributedFileHandler
        the handler, so the caller can remove it again
    """
    file_handler = DistributedFileHandler(str(filename))
    file_handler.setLevel(level)
    logger.addHandler(file_handler)
    return file_handler


def _lock_file(file):
    if os.name == 'nt':
        msvcrt.locking(file.fileno(), msvcrt.LK_LOCK, 1)
    else:
        fcntl.flock(file, fcntl.LOCK_EX | fcntl.LOCK_NB)


def _unlock_file(file):
    if os.name == 'nt':
        msvcrt.locking(file.fileno(), msvcrt.LK_UNLCK, 1)
    else:
        fcntl.flock(file, fcntl.LOCK_UN)
