"""Copy the sample run configurations into a working directory.

    python -m scripts.add_sample_configs [directory]

Every sample is loaded back through the config layer, so a sample that
stops validating fails here rather than at run time.
"""
import glob
import logging
import os
import shutil
import sys

from models.exceptions import MosaicError
from utils.config import load_config

logger = logging.getLogger(__name__)

SAMPLE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")


def sample_config_paths(source=SAMPLE_DIR):
    return sorted(glob.glob(os.path.join(source, "*.toml")))


def check_sample_configs(source=SAMPLE_DIR):
    """Load every sample; returns {name: RunConfig}."""
    loaded = {}
    for path in sample_config_paths(source):
        name = os.path.splitext(os.path.basename(path))[0]
        loaded[name] = load_config(path)
        logger.debug("sample %s: %s model", name, loaded[name].model.submodel.kind)
    return loaded


def add_sample_configs(directory="configs", overwrite=False, source=SAMPLE_DIR):
    """
    Copy the sample configs to ``directory`` and check that each one loads.

    Args:
        directory: target directory, created when missing
        overwrite: replace files that already exist
        source: directory holding the samples

    Returns:
        List of the paths written
    """
    os.makedirs(directory, exist_ok=True)
    written = []
    for path in sample_config_paths(source):
        target = os.path.join(directory, os.path.basename(path))
        if os.path.abspath(target) == os.path.abspath(path):
            pass
        elif os.path.exists(target) and not overwrite:
            logger.info("keeping existing %s", target)
        else:
            shutil.copyfile(path, target)
            written.append(target)
        load_config(target)
    logger.info("%d sample configs written to %s", len(written), directory)
    return written


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    try:
        for path in add_sample_configs(sys.argv[1] if len(sys.argv) > 1 else "configs"):
            print(path)
    except MosaicError as e:
        print(f"error: {str(e)}", file=sys.stderr)
        sys.exit(1)
