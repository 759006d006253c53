from __future__ import annotations

from fractions import Fraction

from hypothesis import HealthCheck, settings

from tvgroute import Client, Model, RoutingInstance, from_arcs

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def make_instance(phase, satellites, snapshots, arcs, models, **flags) -> RoutingInstance:
    """``models`` are ``(size, server, clients)``; a client is a ``Client`` or a bare id."""
    built = tuple(
        Model(Fraction(size), server, tuple(c if isinstance(c, Client) else Client(c) for c in clients))
        for size, server, clients in models
    )
    total = sum((m.size * len(m.clients) for m in built), Fraction(0))
    return RoutingInstance(phase, from_arcs(satellites, snapshots, arcs, total), built, **flags)


def line3(q=1, weights=(1, 1), **flags) -> RoutingInstance:
    """Server 1, chain 1 -> 2 -> 3 with capacity ``q`` in both of two snapshots, clients 2 and 3."""
    arcs = [((1, k), (2, k), q) for k in (1, 2)] + [((2, k), (3, k), q) for k in (1, 2)]
    clients = [Client(2, Fraction(weights[0])), Client(3, Fraction(weights[1]))]
    return make_instance("download", 3, 2, arcs, [(q, 1, clients)], **flags)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
