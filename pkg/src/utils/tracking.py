import logging

import wandb



logger = logging.getLogger(__name__)


def init_tracking(tracking, job_type, config=None):
    """ WandB run for the given job, None when tracking is disabled (the default) """
    tracking = dict(tracking or {})
    mode = tracking.pop("mode", "disabled")
    if mode == "disabled":
        return None
    kwwandb = dict(project=tracking.pop("project", "lf-multilingual-pretrain"),
                   job_type=job_type, mode=mode, **tracking)
    run = wandb.init(**kwwandb)
    if config is not None:
        # Save full config before running in case of crash
        run.config.update(config, allow_val_change=True)
    logger.info("Tracking %s run in wandb (%s mode)", job_type, mode)
    return run
