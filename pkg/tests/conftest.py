from hypothesis import settings

# mpmath comparisons and small simulations have uneven run times
settings.register_profile("default", deadline=None, print_blob=True)
settings.load_profile("default")
