"""Brute-force statevector simulation of small circuit instances.

This is the validation oracle for everything else in the suite: it produces
exact output distributions, reduced density matrices, and Shannon entropies
for circuits small enough to hold as a dense amplitude vector.

Basis convention: computational basis states are labeled ``0 .. q-1`` and
every qudit starts in basis index 0.  Entropies are reported in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .architecture import CircuitInstance, CircuitLayout, Site, lightcone_of_sites

__all__ = [
    "Statevector",
    "OutputDistribution",
    "SizeCapError",
    "simulate_exact",
    "reduced_density",
    "output_distribution",
    "marginal_distribution",
    "exact_entropies",
    "conditional_mutual_information",
    "DEFAULT_CAP_QUBITS",
]

# Default cap on n * log2(q); 24 qubit-equivalents is a 256 MB amplitude vector.
DEFAULT_CAP_QUBITS = 24.0


class SizeCapError(RuntimeError):
    """Raised when a dense simulation would exceed the configured size cap."""


@dataclass
class Statevector:
    """Dense normalized state on ``n_sites`` qudits of local dimension ``q``.

    ``sites`` records which lattice coordinate each tensor axis belongs to,
    in row-major coordinate order; ``amplitudes`` is the flat vector with
    site 0 as the slowest index.
    """

    sites: tuple[Site, ...]
    q: int
    amplitudes: np.ndarray

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def site_axis(self, site: Site) -> int:
        return self.sites.index(site)

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.q,) * self.n_sites)


@dataclass
class OutputDistribution:
    """Dense probability table over outcome strings in ``[q]^n``.

    Flat indexing follows the same row-major convention as
    :class:`Statevector`: the first site is the slowest index.
    """

    sites: tuple[Site, ...]
    q: int
    probs: np.ndarray

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def as_tensor(self) -> np.ndarray:
        return self.probs.reshape((self.q,) * self.n_sites)

    def index_of(self, assignment: dict[Site, int]) -> int:
        idx = 0
        for s in self.sites:
            idx = idx * self.q + assignment[s]
        return idx

    def marginal(self, sites: Iterable[Site]) -> "OutputDistribution":
        keep = [s for s in self.sites if s in set(sites)]
        drop_axes = tuple(i for i, s in enumerate(self.sites) if s not in keep)
        t = self.as_tensor().sum(axis=drop_axes) if drop_axes else self.as_tensor()
        return OutputDistribution(tuple(keep), self.q, t.reshape(-1))

    def entropy(self) -> float:
        """Shannon entropy in bits."""
        p = self.probs[self.probs > 0]
        return float(-np.sum(p * np.log2(p)))

    def tv_distance(self, other: "OutputDistribution") -> float:
        if self.sites != other.sites:
            raise ValueError("distributions are over different site sets")
        return 0.5 * float(np.sum(np.abs(self.probs - other.probs)))


def _check_cap(n_sites: int, q: int, cap_qubits: float) -> None:
    if n_sites * np.log2(q) > cap_qubits:
        raise SizeCapError(
            f"{n_sites} sites of dimension {q} exceed the dense cap of "
            f"{cap_qubits} qubit-equivalents"
        )


def _apply_gate(tensor: np.ndarray, gate: np.ndarray, axes: Sequence[int], q: int) -> np.ndarray:
    """Apply a gate to the given tensor axes, preserving axis order."""
    k = len(axes)
    g = gate.reshape((q,) * (2 * k))
    out = np.tensordot(g, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def simulate_exact(
    instance: CircuitInstance,
    sites: Sequence[Site] | None = None,
    cap_qubits: float = DEFAULT_CAP_QUBITS,
) -> Statevector:
    """Apply every gate of the instance in layer order to the all-zeros state.

    ``sites`` restricts the simulation to a subset of the lattice (the caller
    is responsible for only doing this when the subset is closed under the
    lightcones of interest, e.g. via :func:`restrict_to_lightcone`).
    """
    layout = instance.layout
    q = layout.q
    if sites is None:
        site_list = sorted(layout.sites())
    else:
        site_list = sorted(sites)
    site_set = set(site_list)
    _check_cap(len(site_list), q, cap_qubits)

    tensor = np.zeros((q,) * len(site_list), dtype=np.complex128)
    tensor[(0,) * len(site_list)] = 1.0
    axis = {s: i for i, s in enumerate(site_list)}

    for idx, event in enumerate(layout.events):
        if not all(s in site_set for s in event.sites):
            if any(s in site_set for s in event.sites):
                raise ValueError(
                    f"gate {idx} straddles the site restriction: {event.sites}"
                )
            continue
        gate = instance.gate(idx)
        tensor = _apply_gate(tensor, gate, [axis[s] for s in event.sites], q)

    amps = tensor.reshape(-1)
    norm = np.linalg.norm(amps)
    return Statevector(tuple(site_list), q, amps / norm)


def reduced_density(state: Statevector, region: Iterable[Site]) -> np.ndarray:
    """Reduced density matrix on ``region``; Hermitian with unit trace."""
    region = [s for s in state.sites if s in set(region)]
    if not region:
        raise ValueError("region is empty")
    axes_a = [state.site_axis(s) for s in region]
    rest = [i for i in range(state.n_sites) if i not in axes_a]
    da = state.q ** len(axes_a)
    m = np.transpose(state.as_tensor(), axes_a + rest).reshape(da, -1)
    return m @ m.conj().T


def output_distribution(state: Statevector) -> OutputDistribution:
    return OutputDistribution(state.sites, state.q, np.abs(state.amplitudes) ** 2)


def marginal_distribution(
    instance: CircuitInstance,
    region: Iterable[Site],
    cap_qubits: float = DEFAULT_CAP_QUBITS,
) -> OutputDistribution:
    """Exact marginal of the output distribution on ``region``.

    Only the lightcone of the region is simulated; gates elsewhere cannot
    affect the marginal of a unitary circuit.
    """
    region = sorted(set(region))
    _, cone_sites = lightcone_of_sites(instance.layout, region)
    state = simulate_exact(instance, sites=cone_sites, cap_qubits=cap_qubits)
    return output_distribution(state).marginal(region)


def exact_entropies(
    dist: OutputDistribution,
    partition: tuple[Iterable[Site], Iterable[Site], Iterable[Site]],
) -> tuple[float, float, float, float, float]:
    """Shannon entropies (bits) of a tripartition and the induced CMI.

    Returns ``(S(AB), S(BC), S(B), S(ABC), I(A:C|B))`` where
    ``I(A:C|B) = S(AB) + S(BC) - S(B) - S(ABC)``.
    """
    a, b, c = (sorted(set(x)) for x in partition)
    if set(a) & set(b) or set(b) & set(c) or set(a) & set(c):
        raise ValueError("partition blocks must be disjoint")
    s_ab = dist.marginal(a + b).entropy()
    s_bc = dist.marginal(b + c).entropy()
    s_b = dist.marginal(b).entropy() if b else 0.0
    s_abc = dist.marginal(a + b + c).entropy()
    return s_ab, s_bc, s_b, s_abc, s_ab + s_bc - s_b - s_abc


def conditional_mutual_information(
    instance: CircuitInstance,
    a: Iterable[Site],
    b: Iterable[Site],
    c: Iterable[Site],
    cap_qubits: float = DEFAULT_CAP_QUBITS,
) -> float:
    """Exact ``I(A:C|B)`` of the output distribution of one instance."""
    a, b, c = sorted(set(a)), sorted(set(b)), sorted(set(c))
    dist = marginal_distribution(instance, a + b + c, cap_qubits=cap_qubits)
    return exact_entropies(dist, (a, b, c))[4]
