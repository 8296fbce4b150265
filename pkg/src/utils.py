import logging

from omegaconf import DictConfig, OmegaConf


def display_config(cfg: DictConfig) -> None:
    """Displays the resolved configuration"""
    logger = logging.getLogger()
    logger.info("Configuration:\n")
    logger.info(OmegaConf.to_yaml(cfg, resolve=True))
    logger.info("=" * 40 + "\n")
