import hypothesis

# Reproducible CI: fixed derandomized search, no per-example deadline (the
# quadrature-backed properties have very uneven call times).
hypothesis.settings.register_profile(
    "ci",
    max_examples=50,
    deadline=None,
    derandomize=True,
)
hypothesis.settings.load_profile("ci")
