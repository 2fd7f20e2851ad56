import hypothesis.strategies as st
from hypothesis import settings

from aimon.perm import PartialPerm

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


@st.composite
def partial_perms(draw, n=None, min_n=1, max_n=7):
    """A random injective partial map; n drawn unless fixed."""
    if n is None:
        n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(list(range(1, n + 1))))
    keep = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return PartialPerm(n, tuple(v if k else 0 for v, k in zip(perm, keep)))


@st.composite
def full_perms(draw, n=None, min_n=1, max_n=7):
    if n is None:
        n = draw(st.integers(min_n, max_n))
    return PartialPerm(n, tuple(draw(st.permutations(list(range(1, n + 1))))))


@st.composite
def same_n(draw, k=2, strategy=partial_perms, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    return tuple(draw(strategy(n=n)) for _ in range(k))
