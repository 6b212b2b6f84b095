import logging

from joblib import Parallel, delayed
from tqdm import tqdm

from generator.algorithm import generate
from generator.sampling import GenConfig

logger = logging.getLogger(__name__)


def generate_one(cfg: GenConfig):
    v, _, stats = generate(cfg)
    return cfg, v, stats


def generate_batch(configs: list[GenConfig], jobs: int = 1, progress: bool = False):
    """Run configs in parallel; each result depends only on its own seed."""
    configs = list(configs)
    items = tqdm(configs, desc="generate", disable=not progress)
    if jobs == 1:
        results = [generate_one(cfg) for cfg in items]
    else:
        results = Parallel(n_jobs=jobs)(delayed(generate_one)(cfg) for cfg in items)
    logger.info(f"generated {len(results)} valuations with {jobs} job(s)")
    return results
