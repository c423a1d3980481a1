__version__: str = "0.3.0"
