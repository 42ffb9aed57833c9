"""Constraint-based anaphora resolution as a deterministic argmax search.

Constraints are a coreference partition of the pronoun slots plus optional
per-class candidate entity sets.  Constraints file format: lines
``corefer: s1 s2 ...`` (slot indices merged into one class) and
``candidates: class_slot e1 e2 ...`` (class named by any member slot).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .encoding import EncodingMatrix, VerbMatrix
from .errors import GrammarError, LoadError
from .kb import Vocabulary
from .matrix import (Matrix, compose, identity, one_hot_state, scalar_value,
                     spider, tensor, tensor_all, wire_permutation)
from .semantics import Discourse, _sentence_array, PronounNP


@dataclass(frozen=True)
class MatchingFunction:
    """Assignment of an entity ordinal to each pronoun slot."""
    assignment: tuple[int, ...]

    def __len__(self):
        return len(self.assignment)


@dataclass(frozen=True, eq=False)
class DrsConstraints:
    """Coreference classes (ordered by smallest slot) and candidate sets."""
    classes: tuple[tuple[int, ...], ...]
    candidates: tuple[tuple[int, ...], ...]

    def class_of(self, slot: int) -> int:
        for c, members in enumerate(self.classes):
            if slot in members:
                return c
        raise GrammarError(f"slot {slot} not covered by constraints")


def default_constraints(k: int, vocab: Vocabulary) -> DrsConstraints:
    """Every slot its own class, all entities candidates: D(d) = E^k."""
    all_entities = tuple(range(vocab.n_entities))
    return DrsConstraints(tuple((s,) for s in range(k)),
                          tuple(all_entities for _ in range(k)))


def make_constraints(k: int, vocab: Vocabulary, coref=(),
                     candidates=None) -> DrsConstraints:
    """Build constraints from coreference groups and per-slot candidate names."""
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for group in coref:
        for s in group:
            if not 0 <= s < k:
                raise GrammarError(f"coreference slot {s} out of range")
        for s in group[1:]:
            parent[find(group[0])] = find(s)
    roots: dict[int, list[int]] = {}
    for s in range(k):
        roots.setdefault(find(s), []).append(s)
    classes = tuple(sorted(tuple(sorted(m)) for m in roots.values()))
    all_entities = tuple(range(vocab.n_entities))
    cand_list = []
    for members in classes:
        chosen = None
        for s in members:
            if candidates and s in candidates:
                ents = tuple(sorted(candidates[s]))
                chosen = ents if chosen is None else tuple(
                    sorted(set(chosen) & set(ents)))
        cand_list.append(all_entities if chosen is None else chosen)
    return DrsConstraints(classes, tuple(cand_list))


def load_constraints(path, k: int, vocab: Vocabulary) -> DrsConstraints:
    coref = []
    candidates: dict[int, tuple[int, ...]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("corefer:"):
                try:
                    slots = tuple(int(t) for t in line[len("corefer:"):].split())
                except ValueError:
                    raise LoadError(path, lineno, "bad slot index") from None
                if any(not 0 <= s < k for s in slots):
                    raise LoadError(path, lineno, f"slot out of range in {slots}")
                coref.append(slots)
            elif line.startswith("candidates:"):
                toks = line[len("candidates:"):].split()
                if not toks:
                    raise LoadError(path, lineno, "empty candidates line")
                try:
                    slot = int(toks[0])
                except ValueError:
                    raise LoadError(path, lineno, "bad class slot") from None
                if not 0 <= slot < k:
                    raise LoadError(path, lineno, f"slot {slot} out of range")
                ents = []
                for name in toks[1:]:
                    if name not in vocab.entity_index:
                        raise LoadError(path, lineno, f"unknown entity {name!r}")
                    ents.append(vocab.entity_index[name])
                if not ents:
                    raise LoadError(path, lineno, "empty candidate set")
                candidates[slot] = tuple(ents)
            else:
                raise LoadError(path, lineno, f"unrecognized line {line!r}")
    return make_constraints(k, vocab, coref, candidates)


def enumerate_matchings(constraints: DrsConstraints, k: int,
                        vocab: Vocabulary):
    """All constrained matchings, lexicographic over per-class entity choices."""
    if sorted(s for members in constraints.classes for s in members) != list(range(k)):
        raise GrammarError("constraints do not partition the slots")
    if any(not c for c in constraints.candidates):
        raise GrammarError("empty candidate set")
    slot_class = {s: c for c, members in enumerate(constraints.classes)
                  for s in members}
    for choice in itertools.product(*constraints.candidates):
        assignment = tuple(choice[slot_class[s]] for s in range(k))
        yield MatchingFunction(assignment)


def resolution_scalar(d: Discourse, mu: MatchingFunction, enc: EncodingMatrix,
                      verbs: VerbMatrix):
    """Discourse scalar with each pronoun wire bound to its assigned entity.

    Sparse path: a per-sentence O(n^2) contraction per sentence, combined by
    the semiring product; |E|^k is never materialized.
    """
    if len(mu) != d.k:
        raise GrammarError(f"matching of length {len(mu)} for k={d.k}")
    return _bound_scalar(d.sentences, dict(enumerate(mu.assignment)),
                         enc, verbs)


def _bound_scalar(sentences, slot_to_entity: dict[int, int],
                  enc: EncodingMatrix, verbs: VerbMatrix):
    sr = enc.semiring
    ne = enc.vocab.n_entities
    total = sr.one
    for s in sentences:
        sb = ob = None
        if isinstance(s.subject, PronounNP):
            sb = _one_hot_array(slot_to_entity[s.subject.slot], ne, sr)
        if isinstance(s.object, PronounNP):
            ob = _one_hot_array(slot_to_entity[s.object.slot], ne, sr)
        total = sr.mul(total, _sentence_array(s, enc, verbs, sb, ob))
    return np.asarray(total).reshape(())[()]


def _one_hot_array(i: int, n: int, sr) -> np.ndarray:
    out = np.zeros(n, dtype=sr.dtype)
    out[i] = sr.one
    return out


def _semiring_order_key(x) -> float:
    return float(x)


def score_all_matchings(d: Discourse, constraints: DrsConstraints,
                        enc: EncodingMatrix, verbs: VerbMatrix,
                        vocab: Vocabulary):
    """Every constrained matching with its scalar, in enumeration order."""
    return [(mu, resolution_scalar(d, mu, enc, verbs))
            for mu in enumerate_matchings(constraints, d.k, vocab)]


def resolve_argmax(d: Discourse, constraints: DrsConstraints,
                   enc: EncodingMatrix, verbs: VerbMatrix,
                   vocab: Vocabulary) -> tuple[MatchingFunction, object]:
    """Best matching under the semiring order, ties broken by enumeration order.

    Classes not sharing any sentence factorize: each connected component of
    the class/sentence sharing graph is searched independently and the
    componentwise maxima multiply, so c independent classes cost
    O(c * |candidates| * l * n^2) rather than |candidates|^c.
    """
    sr = enc.semiring
    k = d.k
    if any(not c for c in constraints.candidates):
        raise GrammarError("empty candidate set")
    if k == 0:
        mu = MatchingFunction(())
        return mu, resolution_scalar(d, mu, enc, verbs)

    slot_class = {s: c for c, members in enumerate(constraints.classes)
                  for s in members}
    n_classes = len(constraints.classes)

    # union classes sharing a sentence
    parent = list(range(n_classes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    sentence_classes = []
    for s in d.sentences:
        cls = sorted({slot_class[slot] for slot in s.slots()})
        sentence_classes.append(cls)
        for c in cls[1:]:
            parent[find(cls[0])] = find(c)

    components: dict[int, list[int]] = {}
    for c in range(n_classes):
        components.setdefault(find(c), []).append(c)
    comp_list = sorted(components.values())

    total = sr.one
    for s, cls in zip(d.sentences, sentence_classes):
        if not cls:
            total = sr.mul(total, _bound_scalar((s,), {}, enc, verbs))

    best = [0] * n_classes
    for comp in comp_list:
        comp_sentences = [s for s, cls in zip(d.sentences, sentence_classes)
                          if cls and all(c in comp for c in cls)]
        best_choice, best_score = None, None
        for choice in itertools.product(
                *(constraints.candidates[c] for c in comp)):
            by_class = dict(zip(comp, choice))
            binding = {slot: by_class[slot_class[slot]]
                       for s in comp_sentences for slot in s.slots()}
            score = _bound_scalar(comp_sentences, binding, enc, verbs)
            if best_score is None or (_semiring_order_key(score)
                                      > _semiring_order_key(best_score)):
                best_choice, best_score = choice, score
        for c, e in zip(comp, best_choice):
            best[c] = e
        total = sr.mul(total, best_score)

    assignment = tuple(best[slot_class[s]] for s in range(k))
    return MatchingFunction(assignment), np.asarray(total).reshape(())[()]


# ---------------------------------------------------------------------------
# Structural evaluators for the entity-store factorization.

def matching_process_eval(d: Discourse, mu: MatchingFunction,
                          enc: EncodingMatrix, verbs: VerbMatrix):
    """Evaluate the discourse through an explicit entity store and copy spiders.

    Per entity referenced by i slots, a 1-input i-output spider copies the
    stored state; each copy is recovered by discarding the other copy wires
    and fed to its discourse wire.  Unreferenced entities are discarded with
    the 1-input 0-output spider (each contributing the scalar 1).
    """
    if len(mu) != d.k:
        raise GrammarError(f"matching of length {len(mu)} for k={d.k}")
    sr = enc.semiring
    ne = enc.vocab.n_entities
    referencing: dict[int, list[int]] = {}
    for slot, e in enumerate(mu.assignment):
        referencing.setdefault(e, []).append(slot)

    total = sr.one
    slot_states: dict[int, np.ndarray] = {}
    discard = spider(1, 0, ne, sr)
    for e in range(ne):
        store = one_hot_state(e, ne, sr)
        slots = referencing.get(e, [])
        if not slots:
            total = sr.mul(total, scalar_value(compose(store, discard)))
            continue
        i = len(slots)
        copied = compose(store, spider(1, i, ne, sr))
        for w, slot in enumerate(slots):
            keep = [identity(ne, sr) if j == w else discard for j in range(i)]
            factor = compose(copied, tensor_all(keep, sr))
            slot_states[slot] = factor.entries.reshape(-1)

    for s in d.sentences:
        sb = slot_states.get(s.subject.slot) if isinstance(
            s.subject, PronounNP) else None
        ob = slot_states.get(s.object.slot) if isinstance(
            s.object, PronounNP) else None
        total = sr.mul(total, _sentence_array(s, enc, verbs, sb, ob))
    return np.asarray(total).reshape(())[()]


def dense_theorem_check(d: Discourse, mu: MatchingFunction,
                        enc: EncodingMatrix, verbs: VerbMatrix,
                        max_entities: int = 4):
    """Sparse scalar vs. fully materialized store/process contraction.

    The second component composes the dense entity store 1 -> |E|^|E|, the
    matching-process incidence matrix (built from tensored copy/discard
    spiders followed by an explicit wire permutation) and the dense
    discourse effect.  Guarded to |E| <= max_entities.
    """
    from .semantics import discourse_effect
    sr = enc.semiring
    ne = enc.vocab.n_entities
    if ne > max_entities:
        raise GrammarError(
            f"dense check limited to |E| <= {max_entities}, got {ne}")
    sparse = resolution_scalar(d, mu, enc, verbs)

    store = tensor_all([one_hot_state(e, ne, sr) for e in range(ne)], sr)
    counts = [0] * ne
    for e in mu.assignment:
        counts[e] += 1
    spiders = tensor_all([spider(1, counts[e], ne, sr) for e in range(ne)], sr)
    # grouped wire order: per entity in vocabulary order, its slots ascending
    grouped = [slot for e in range(ne)
               for slot in sorted(s for s, a in enumerate(mu.assignment)
                                  if a == e)]
    if d.k:
        perm = tuple(grouped.index(slot) for slot in range(d.k))
        process = compose(spiders, wire_permutation(perm, ne, sr))
    else:
        process = spiders
    dense = scalar_value(compose(compose(store, process),
                                 discourse_effect(d, enc, verbs)))
    return sparse, dense
