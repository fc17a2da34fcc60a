import logging

from monitoring import get_logger, traceable


def test_traceable_keeps_functions_callable():
    @traceable
    def bare(x):
        return x + 1

    @traceable(name="named", run_type="chain")
    def named(x):
        return x * 2

    assert bare(1) == 2
    assert named(3) == 6
    assert named.__name__ == "named"


def test_loggers_hang_off_the_toolkit_root():
    logger = get_logger("domain.mbn.service")
    assert logger.name == "mbnsep.domain.mbn.service"
    root = logging.getLogger("mbnsep")
    assert root.handlers
    assert root.propagate is False
