import os

from hypothesis import HealthCheck, Verbosity, settings

settings.register_profile('fast', max_examples=15, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('ci', max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('debugger', max_examples=5, deadline=None, verbosity=Verbosity.verbose)
settings.load_profile(os.getenv('HYPOTHESIS_PROFILE', 'fast'))
