"""
Sequence-form representation of two-player zero-sum games.

Strategies are flat float64 arrays indexed by sequence. Index 0 is the empty
sequence. A behavior strategy stores sigma(I, a) at the index of the sequence Ia
(and 1 at index 0); a sequence-form strategy stores q(Ia).
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, NamedTuple

import numpy as np
from numpy.typing import NDArray
import scipy.sparse as sp

BehaviorStrategy = NDArray[np.float64]
SequenceStrategy = NDArray[np.float64]

SIMPLEX_TOL = 1e-9  # Flow and simplex tolerance used by validation.
EMPTY_SEQUENCE = 0


class InfosetNode(NamedTuple):
    """
    A single decision point of one player.

    id is the registration index of the infoset (stable across orderings),
    key is a readable label, sequences holds the sequence index Ia of every
    action, and children holds, per action, the ids of the infosets C(I, a).
    """
    id: int
    key: Hashable
    parent_sequence: int
    actions: tuple
    sequences: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]


class Segments(NamedTuple):
    """
    A set of infosets laid out for vectorised per-infoset reductions.

    seqs concatenates the action sequences of each infoset; offsets marks where
    each infoset's block starts inside seqs; owner maps every entry of seqs back
    to its block.
    """
    seqs: NDArray[np.int64]
    offsets: NDArray[np.int64]
    sizes: NDArray[np.int64]
    owner: NDArray[np.int64]
    infosets: NDArray[np.int64]
    parents: NDArray[np.int64]

    def __len__(self) -> int:
        return len(self.offsets)

    def sum(self, values: NDArray) -> NDArray:
        """Per-infoset sum of a sequence-indexed array."""
        if len(self.offsets) == 0:
            return np.zeros(0)
        return np.add.reduceat(values[self.seqs], self.offsets)

    def inner(self, a: NDArray, b: NDArray) -> NDArray:
        """Per-infoset inner product <a(I), b(I)>."""
        if len(self.offsets) == 0:
            return np.zeros(0)
        return np.add.reduceat(a[self.seqs] * b[self.seqs], self.offsets)

    def argmax(self, values: NDArray) -> tuple[NDArray, NDArray]:
        """
        Per-infoset maximum and the local index attaining it.
        Ties go to the lowest action index.
        """
        if len(self.offsets) == 0:
            return np.zeros(0), np.zeros(0, dtype=np.int64)
        block = values[self.seqs]
        best = np.maximum.reduceat(block, self.offsets)
        local = np.arange(len(self.seqs)) - self.offsets[self.owner]
        candidates = np.where(block >= best[self.owner], local, len(self.seqs))
        arg = np.minimum.reduceat(candidates, self.offsets)
        return best, arg

    def spread(self, per_infoset: NDArray) -> NDArray:
        """Broadcast a per-infoset array onto the entries of seqs."""
        return per_infoset[self.owner]


@dataclass(frozen=True)
class Treeplex:
    """
    The sequence-form decision space of one player.

    Infosets are stored bottom-up: every infoset appears after all infosets in
    its subtree, so a forward pass over `infosets` is a valid bottom-up traversal.
    """
    player: int
    infosets: tuple[InfosetNode, ...]
    num_sequences: int

    @cached_property
    def _positions(self) -> dict[int, int]:
        return {node.id: pos for pos, node in enumerate(self.infosets)}

    @cached_property
    def _keys(self) -> dict[Hashable, int]:
        return {node.key: pos for pos, node in enumerate(self.infosets)}

    @cached_property
    def sequence_owner(self) -> NDArray[np.int64]:
        """Position of the infoset owning each sequence, -1 for the empty sequence."""
        owner = np.full(self.num_sequences, -1, dtype=np.int64)
        for pos, node in enumerate(self.infosets):
            owner[list(node.sequences)] = pos
        return owner

    @cached_property
    def depths(self) -> NDArray[np.int64]:
        """Number of own decisions taken before reaching each infoset."""
        owner = self.sequence_owner
        depth = np.zeros(len(self.infosets), dtype=np.int64)
        for pos in range(len(self.infosets) - 1, -1, -1):
            parent = self.infosets[pos].parent_sequence
            depth[pos] = 0 if parent == EMPTY_SEQUENCE else depth[owner[parent]] + 1
        return depth

    def _segments(self, positions) -> Segments:
        nodes = sorted((self.infosets[p] for p in positions), key=lambda n: n.sequences[0])
        sizes = np.array([len(n.sequences) for n in nodes], dtype=np.int64)
        seqs = np.fromiter((s for n in nodes for s in n.sequences), dtype=np.int64,
                           count=int(sizes.sum()))
        offsets = np.concatenate(([0], np.cumsum(sizes)[:-1])).astype(np.int64) \
            if len(nodes) else np.zeros(0, dtype=np.int64)
        owner = np.repeat(np.arange(len(nodes)), sizes)
        return Segments(seqs=seqs,
                        offsets=offsets,
                        sizes=sizes,
                        owner=owner,
                        infosets=np.array([self._positions[n.id] for n in nodes], dtype=np.int64),
                        parents=np.array([n.parent_sequence for n in nodes], dtype=np.int64))

    @cached_property
    def blocks(self) -> Segments:
        """All infosets as one segment layout."""
        return self._segments(range(len(self.infosets)))

    @cached_property
    def levels(self) -> tuple[Segments, ...]:
        """Infosets grouped by depth, deepest first (bottom-up order)."""
        depths = self.depths
        if len(depths) == 0:
            return ()
        return tuple(self._segments(np.flatnonzero(depths == d))
                     for d in range(int(depths.max()), -1, -1))

    @cached_property
    def action_counts(self) -> NDArray[np.float64]:
        """|A(I)| broadcast to every sequence (1 for the empty sequence)."""
        counts = np.ones(self.num_sequences)
        blocks = self.blocks
        counts[blocks.seqs] = blocks.spread(blocks.sizes)
        return counts

    @property
    def num_infosets(self) -> int:
        return len(self.infosets)

    def infoset(self, key: Hashable) -> InfosetNode:
        """Look up an infoset by its key."""
        try:
            return self.infosets[self._keys[key]]
        except KeyError:
            raise ValueError(f"Player {self.player} has no infoset {key!r}.") from None

    def infoset_view(self, sigma: BehaviorStrategy) -> dict[Hashable, NDArray]:
        """Split a flat behavior strategy into a readable {infoset key: simplex} mapping."""
        return {node.key: sigma[list(node.sequences)] for node in reversed(self.infosets)}


class TreeplexBuilder:
    """
    Incrementally register the infosets of one player while walking a game tree.

    Infosets must be registered in an order where the infoset owning a parent
    sequence is registered first (any depth-first walk of a perfect-recall game
    does this). Sequence indices are handed out top-down in registration order.
    """

    def __init__(self, player: int) -> None:
        self.player = player
        self._ids: dict[Hashable, int] = {}
        self._parents: list[int] = []
        self._actions: list[tuple] = []
        self._sequences: list[tuple[int, ...]] = []
        self._children: list[list[list[int]]] = []
        self._owner: list[tuple[int, int]] = [(-1, -1)]  # sequence -> (infoset id, action slot)

    def add(self, key: Hashable, parent_sequence: int, actions) -> int:
        """
        Register an infoset (idempotent) and return its id.

        :param key: The information set key as produced by the game.
        :param parent_sequence: The player's last sequence before reaching the infoset.
        :param actions: The legal actions at the infoset.
        :return: The id of the infoset.
        """
        actions = tuple(actions)
        if key in self._ids:
            iid = self._ids[key]
            if self._parents[iid] != parent_sequence or len(self._actions[iid]) != len(actions):
                raise ValueError(f"Infoset {key!r} of player {self.player} violates perfect recall.")
            return iid
        if len(actions) == 0:
            raise ValueError(f"Infoset {key!r} of player {self.player} has no actions.")

        iid = len(self._parents)
        start = len(self._owner)
        self._ids[key] = iid
        self._parents.append(parent_sequence)
        self._actions.append(actions)
        self._sequences.append(tuple(range(start, start + len(actions))))
        self._children.append([[] for _ in actions])
        self._owner.extend((iid, slot) for slot in range(len(actions)))
        if parent_sequence != EMPTY_SEQUENCE:
            parent_id, slot = self._owner[parent_sequence]
            self._children[parent_id][slot].append(iid)
        return iid

    def sequence(self, infoset_id: int, action_index: int) -> int:
        return self._sequences[infoset_id][action_index]

    def build(self) -> Treeplex:
        nodes = [InfosetNode(id=iid,
                             key=key,
                             parent_sequence=self._parents[iid],
                             actions=self._actions[iid],
                             sequences=self._sequences[iid],
                             children=tuple(tuple(c) for c in self._children[iid]))
                 for key, iid in self._ids.items()]
        # Registration order is top-down, so its reverse is bottom-up.
        return Treeplex(player=self.player,
                        infosets=tuple(reversed(nodes)),
                        num_sequences=len(self._owner))


@dataclass(frozen=True)
class GameForm:
    """
    A two-player zero-sum game in sequence form.

    The payoff entries (rows, cols, values) hold u1(z) already multiplied by the
    chance reach of terminal z; u2 = -u1 is never stored.
    """
    name: str
    treeplexes: tuple[Treeplex, Treeplex]
    rows: NDArray[np.int64]
    cols: NDArray[np.int64]
    values: NDArray[np.float64]
    source: object = field(default=None, compare=False, repr=False)

    def treeplex(self, player: int) -> Treeplex:
        if player not in (1, 2):
            raise ValueError(f"player must be 1 or 2, not {player!r}")
        return self.treeplexes[player - 1]

    @property
    def payoff_entries(self) -> list[tuple[int, int, float]]:
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.values.tolist()))

    @cached_property
    def payoff(self) -> sp.csr_matrix:
        shape = (self.treeplexes[0].num_sequences, self.treeplexes[1].num_sequences)
        return sp.csr_matrix((self.values, (self.rows, self.cols)), shape=shape)

    @cached_property
    def payoff_t(self) -> sp.csr_matrix:
        return self.payoff.T.tocsr()

    def utility_vector(self, player: int, q_opp: SequenceStrategy) -> NDArray[np.float64]:
        """
        Utility of each of `player`'s sequences against the opponent strategy,
        i.e. U q2 for player 1 and -U^T q1 for player 2.
        """
        if player == 1:
            return np.asarray(self.payoff @ q_opp, dtype=np.float64)
        elif player == 2:
            return -np.asarray(self.payoff_t @ q_opp, dtype=np.float64)
        raise ValueError(f"player must be 1 or 2, not {player!r}")

    def expected_value(self, q1: SequenceStrategy, q2: SequenceStrategy) -> float:
        """Expected utility of player 1, <q1, U q2>."""
        return float(q1 @ (self.payoff @ q2))


def uniform_strategy(t: Treeplex) -> BehaviorStrategy:
    """The behavior strategy playing uniformly at every infoset."""
    return 1.0 / t.action_counts


def behavior_from_mapping(t: Treeplex, mapping: dict[Hashable, list[float]]) -> BehaviorStrategy:
    """
    Build a behavior strategy from {infoset key: probabilities}. Infosets that are
    not listed play uniformly.
    """
    sigma = uniform_strategy(t)
    for key, probs in mapping.items():
        node = t.infoset(key)
        probs = np.asarray(probs, dtype=np.float64)
        if probs.shape != (len(node.sequences),):
            raise ValueError(f"Infoset {key!r} expects {len(node.sequences)} probabilities, "
                             f"got {probs.shape}.")
        sigma[list(node.sequences)] = probs
    return sigma


def _check_shape(t: Treeplex, x: NDArray, what: str) -> None:
    if np.shape(x) != (t.num_sequences,):
        raise ValueError(f"{what} has shape {np.shape(x)} but player {t.player}'s treeplex "
                         f"has {t.num_sequences} sequences.")


def behavior_to_sequence(t: Treeplex, sigma: BehaviorStrategy) -> SequenceStrategy:
    """
    Convert a behavior strategy into its sequence form, q(Ia) = q(pI) sigma(I, a).

    :param t: The player's treeplex.
    :param sigma: A behavior strategy indexed by sequence.
    :return: The sequence-form strategy with q(empty) = 1.
    """
    _check_shape(t, sigma, "Behavior strategy")
    q = np.empty(t.num_sequences)
    q[EMPTY_SEQUENCE] = 1.0
    for level in reversed(t.levels):  # Top-down.
        q[level.seqs] = level.spread(q[level.parents]) * sigma[level.seqs]
    return q


def flow_violation(t: Treeplex, q: SequenceStrategy) -> float:
    """Largest absolute violation of q(empty) = 1 and sum_a q(Ia) = q(pI)."""
    blocks = t.blocks
    worst = abs(q[EMPTY_SEQUENCE] - 1.0)
    if len(blocks):
        worst = max(worst, float(np.max(np.abs(blocks.sum(q) - q[blocks.parents]))))
    return worst


def sequence_to_behavior(t: Treeplex, q: SequenceStrategy, check: bool = True) -> BehaviorStrategy:
    """
    Convert a sequence-form strategy into a behavior strategy, sigma(I, a) = q(Ia) / q(pI).
    Infosets the player never reaches (q(pI) = 0) get the uniform distribution.

    :param t: The player's treeplex.
    :param q: A sequence-form strategy.
    :param check: Verify the flow constraints first.
    :return: The behavior strategy indexed by sequence.
    """
    _check_shape(t, q, "Sequence strategy")
    if check:
        violation = flow_violation(t, q)
        if violation > SIMPLEX_TOL or np.any(q < -SIMPLEX_TOL):
            raise ValueError(f"Sequence strategy violates the flow constraints by {violation:.3g}.")

    blocks = t.blocks
    sigma = np.ones(t.num_sequences)
    if len(blocks):
        reach = blocks.spread(q[blocks.parents])
        reached = reach > 0
        sigma[blocks.seqs] = np.where(reached,
                                      q[blocks.seqs] / np.where(reached, reach, 1.0),
                                      1.0 / blocks.spread(blocks.sizes))
    return sigma


def validate(t: Treeplex) -> list[str]:
    """
    Check every structural invariant of a treeplex.

    :param t: The treeplex to check.
    :return: A list of human readable problems. Empty if the treeplex is valid.
    """
    problems = []
    n = t.num_sequences
    positions = {}
    for pos, node in enumerate(t.infosets):
        if node.id in positions:
            problems.append(f"Infoset id {node.id} appears twice.")
        positions[node.id] = pos

    owner = {}
    total_actions = 0
    for node in t.infosets:
        total_actions += len(node.sequences)
        if len(node.sequences) == 0:
            problems.append(f"Infoset {node.key!r} has no actions.")
        if len(node.children) != len(node.sequences):
            problems.append(f"Infoset {node.key!r} lists children for "
                            f"{len(node.children)} of {len(node.sequences)} actions.")
        if not 0 <= node.parent_sequence < n:
            problems.append(f"Infoset {node.key!r} has invalid parent sequence {node.parent_sequence}.")
        for slot, s in enumerate(node.sequences):
            if not 0 < s < n:
                problems.append(f"Infoset {node.key!r} owns invalid sequence {s}.")
            elif s in owner:
                problems.append(f"Sequence {s} belongs to more than one (I, a) pair.")
            else:
                owner[s] = (node.id, slot)

    if n != 1 + total_actions:
        problems.append(f"Sequence count {n} != 1 + {total_actions} actions.")
    missing = set(range(1, n)) - set(owner)
    if missing:
        problems.append(f"Sequences {sorted(missing)[:10]} belong to no infoset.")

    for node in t.infosets:
        for slot, child_ids in enumerate(node.children):
            for cid in child_ids:
                if cid not in positions:
                    problems.append(f"Infoset {node.key!r} lists unknown child {cid}.")
                    continue
                child = t.infosets[positions[cid]]
                if slot < len(node.sequences) and child.parent_sequence != node.sequences[slot]:
                    problems.append(f"Child {child.key!r} of {node.key!r} has parent sequence "
                                    f"{child.parent_sequence}, expected {node.sequences[slot]}.")
                if positions[cid] > positions[node.id]:
                    problems.append(f"Infoset {node.key!r} is listed before its descendant "
                                    f"{child.key!r}; ordering is not bottom-up.")

    # Walk every parent chain to the empty sequence to detect cycles.
    for node in t.infosets:
        seen = {node.id}
        current = node
        while current.parent_sequence != EMPTY_SEQUENCE:
            parent = owner.get(current.parent_sequence)
            if parent is None:
                break
            pid = parent[0]
            if pid in seen:
                problems.append(f"Infoset {node.key!r} lies on a cycle of parent links.")
                break
            seen.add(pid)
            current = t.infosets[positions[pid]]
    return problems
