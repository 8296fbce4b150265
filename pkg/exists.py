import sys

import hydra
from omegaconf import DictConfig

import src.runner as runner
import src.utils as utils


@hydra.main(config_path="conf", config_name="exists")
def exists(cfg: DictConfig):
    utils.display_config(cfg)
    sys.exit(runner.guarded(runner.exists, cfg))


if __name__ == "__main__":
    exists()
