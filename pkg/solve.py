import sys

import hydra
from omegaconf import DictConfig

import src.runner as runner
import src.utils as utils


@hydra.main(config_path="conf", config_name="solve")
def solve(cfg: DictConfig):
    utils.display_config(cfg)
    sys.exit(runner.guarded(runner.solve, cfg))


if __name__ == "__main__":
    solve()
