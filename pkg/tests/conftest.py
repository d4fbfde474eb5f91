import hypothesis

# CI determinism: examples derived from the test body, no wall-clock deadline
# (exact rational arithmetic has no meaningful per-example time budget).
hypothesis.settings.register_profile(
    "deterministic", derandomize=True, max_examples=200, deadline=None
)
hypothesis.settings.load_profile("deterministic")
