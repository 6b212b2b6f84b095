import logging

from celery import shared_task

from generator.algorithm import generate
from generator.sampling import GenConfig
from valcore.values import format_value

logger = logging.getLogger(__name__)


@shared_task
def generate_valuation(k: int, model: str = "uniform", m: int = 5, seed: int = 0, mu0=None) -> dict:
    cfg = GenConfig(k=k, model=model, m=m, seed=seed, mu0=tuple(mu0 or ()))
    v, _, stats = generate(cfg)
    logger.info(f"[generate_valuation] K={k} {cfg.label} seed={seed} done in {stats.seconds:.3f}s")
    return {
        "k": k,
        "seed": seed,
        "model": cfg.label,
        "table": [format_value(x) for x in v.table],
        "stats": stats.as_dict(),
    }
