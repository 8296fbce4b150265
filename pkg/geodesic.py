import sys

import hydra
from omegaconf import DictConfig

import src.runner as runner
import src.utils as utils


@hydra.main(config_path="conf", config_name="geodesic")
def geodesic(cfg: DictConfig):
    utils.display_config(cfg)
    sys.exit(runner.guarded(runner.geodesic, cfg))


if __name__ == "__main__":
    geodesic()
