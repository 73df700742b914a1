from importlib.metadata import PackageNotFoundError, version

__author__ = "The weighted-means developers"
try:
    __version__ = version("weighted-means")
except PackageNotFoundError:
    # package is not installed
    pass
