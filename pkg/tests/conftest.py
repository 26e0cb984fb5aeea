import pytest

from mwckernel._flow import warmup


@pytest.fixture(scope="session", autouse=True)
def _jit_warm():
    # compile the flow kernels before anything is timed
    warmup()
