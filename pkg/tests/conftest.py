from dataclasses import replace

import pytest

from thermoshift import Scenario
from thermoshift.suites import PHONE_PROFILE, PI_PROFILE, SUITES


def phone_scenario(duration=900.0, seed=1, baseline=False, **overrides):
    suite = SUITES["slimmable-resnet50-phone"]
    scenario = Scenario(
        profile=PHONE_PROFILE,
        large=suite.large,
        small=suite.small,
        controller=None if baseline else suite.controller,
        pacing=suite.pacing,
        duration=duration,
        seed=seed,
        platform=suite.platform,
    )
    return replace(scenario, **overrides) if overrides else scenario


def pi_scenario(duration=900.0, seed=1, baseline=False, **overrides):
    suite = SUITES["slimmable-resnet50-pi"]
    scenario = Scenario(
        profile=PI_PROFILE,
        large=suite.large,
        small=suite.small,
        controller=None if baseline else suite.controller,
        pacing=suite.pacing,
        duration=duration,
        seed=seed,
        platform=suite.platform,
    )
    return replace(scenario, **overrides) if overrides else scenario


@pytest.fixture
def phone_suite():
    return SUITES["slimmable-resnet50-phone"]


@pytest.fixture
def pi_suite():
    return SUITES["slimmable-resnet50-pi"]
