"""Controlled-language parsing and diagram evaluation of sentences and discourses.

Grammar (whitespace-separated tokens):

    discourse := sentence+
    sentence  := NP verb NP "."
    NP        := ENTITY | PRONOUN | ENTITY "that" verb NP
    PRONOUN   := he | him | she | her | they | them | it

Pronoun slots are numbered in reading order (subject before object within a
sentence).  Relative clauses restrict entity heads only and may not contain
pronouns; nesting depth is configurable (default one level).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import EncodingMatrix, VerbMatrix
from .errors import GrammarError
from .kb import Vocabulary
from .matrix import Matrix, check_budget, prod
from .semiring import Semiring

PRONOUNS = frozenset({"he", "him", "she", "her", "they", "them", "it"})


@dataclass(frozen=True)
class EntityNP:
    ordinal: int


@dataclass(frozen=True)
class PronounNP:
    slot: int
    surface: str


@dataclass(frozen=True)
class RestrictedNP:
    head: EntityNP
    verb: int
    complement: "NounPhrase"


NounPhrase = EntityNP | PronounNP | RestrictedNP


@dataclass(frozen=True)
class AtomicSentence:
    subject: NounPhrase
    verb: int
    object: NounPhrase

    @property
    def a(self) -> int:
        return int(isinstance(self.subject, PronounNP))

    @property
    def b(self) -> int:
        return int(isinstance(self.object, PronounNP))

    def slots(self) -> tuple[int, ...]:
        out = []
        if isinstance(self.subject, PronounNP):
            out.append(self.subject.slot)
        if isinstance(self.object, PronounNP):
            out.append(self.object.slot)
        return tuple(out)


@dataclass(frozen=True)
class Discourse:
    sentences: tuple[AtomicSentence, ...]
    k: int


def load_lemmas(path) -> dict[str, str]:
    """Optional surface -> relation map, tab-separated, one pair per line."""
    lemmas = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise GrammarError(f"bad lemma line {line!r}")
            lemmas[parts[0]] = parts[1]
    return lemmas


class _Cursor:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise GrammarError("unexpected end of input", self.pos)
        if expected is not None and tok != expected:
            raise GrammarError(f"expected {expected!r}, found {tok!r}", self.pos)
        self.pos += 1
        return tok


class _Parser:
    def __init__(self, tokens, vocab: Vocabulary, lemmas, max_clause_depth):
        self.cur = _Cursor(tokens)
        self.vocab = vocab
        self.lemmas = lemmas or {}
        self.max_depth = max_clause_depth
        self.next_slot = 0

    def verb(self) -> int:
        pos = self.cur.pos
        tok = self.cur.next()
        tok = self.lemmas.get(tok, tok)
        if tok not in self.vocab.relation_index:
            raise GrammarError(f"unknown verb {tok!r}", pos)
        return self.vocab.relation_index[tok]

    def noun_phrase(self, allow_pronoun: bool, depth: int = 0) -> NounPhrase:
        pos = self.cur.pos
        tok = self.cur.next()
        if tok in PRONOUNS:
            if not allow_pronoun:
                raise GrammarError(
                    f"pronoun {tok!r} not allowed inside a relative clause", pos)
            slot = self.next_slot
            self.next_slot += 1
            return PronounNP(slot, tok)
        if tok not in self.vocab.entity_index:
            raise GrammarError(f"unknown entity {tok!r}", pos)
        head = EntityNP(self.vocab.entity_index[tok])
        if self.cur.peek() == "that":
            if depth >= self.max_depth:
                raise GrammarError("relative clause nested too deeply",
                                   self.cur.pos)
            self.cur.next("that")
            v = self.verb()
            complement = self.noun_phrase(allow_pronoun=False, depth=depth + 1)
            return RestrictedNP(head, v, complement)
        return head

    def sentence(self) -> AtomicSentence:
        subject = self.noun_phrase(allow_pronoun=True)
        v = self.verb()
        obj = self.noun_phrase(allow_pronoun=True)
        self.cur.next(".")
        return AtomicSentence(subject, v, obj)

    def discourse(self) -> Discourse:
        sentences = [self.sentence()]
        while self.cur.peek() is not None:
            sentences.append(self.sentence())
        return Discourse(tuple(sentences), self.next_slot)


def parse_discourse(text: str, vocab: Vocabulary, lemmas=None,
                    max_clause_depth: int = 1) -> Discourse:
    tokens = text.split()
    if not tokens:
        raise GrammarError("empty input")
    return _Parser(tokens, vocab, lemmas, max_clause_depth).discourse()


def parse_sentence(text: str, vocab: Vocabulary, lemmas=None,
                   max_clause_depth: int = 1) -> AtomicSentence:
    d = parse_discourse(text, vocab, lemmas, max_clause_depth)
    if len(d.sentences) != 1:
        raise GrammarError(f"expected one sentence, found {len(d.sentences)}")
    return d.sentences[0]


# ---------------------------------------------------------------------------
# Evaluation.  Internally we contract innermost vectors first: each sentence
# costs O(n^2) using the verb column reshaped to n x n; the dense triple
# space |E| x |R| x |E| is never materialized.

def _noun_array(np_: NounPhrase, enc: EncodingMatrix,
                verbs: VerbMatrix) -> np.ndarray:
    sr = enc.semiring
    if isinstance(np_, EntityNP):
        return enc.column(np_.ordinal)
    if isinstance(np_, RestrictedNP):
        head = _noun_array(np_.head, enc, verbs)
        comp = _noun_array(np_.complement, enc, verbs)
        square = verbs.square(np_.verb)
        # contract the verb's object wire with the complement, then intersect
        y = sr.sum(sr.mul(square, comp[None, :]), axis=1)
        return sr.mul(head, y)
    raise GrammarError(f"pronoun {np_.surface!r} in a closed noun phrase")


def noun_vector(np_: NounPhrase, enc: EncodingMatrix,
                verbs: VerbMatrix) -> Matrix:
    """State 1 -> n for a pronoun-free noun phrase."""
    vec = _noun_array(np_, enc, verbs)
    return Matrix(enc.semiring, (), (enc.n,), vec.reshape(-1, 1))


def _sentence_array(s: AtomicSentence, enc: EncodingMatrix, verbs: VerbMatrix,
                    subj_bound: np.ndarray | None = None,
                    obj_bound: np.ndarray | None = None) -> np.ndarray:
    """Sentence contraction with optional |E|-vectors bound to pronoun wires.

    Returns a scalar array when no wire stays open, an (|E|,) array with one
    open wire, or an (|E|, |E|) array (subject axis first) with both open.
    """
    sr = enc.semiring
    square = verbs.square(s.verb)
    emat = enc.matrix.entries  # (n, |E|)

    if isinstance(s.subject, PronounNP):
        subj = None if subj_bound is None else sr.matmul(
            emat, subj_bound.reshape(-1, 1)).reshape(-1)
    else:
        subj = _noun_array(s.subject, enc, verbs)
    if isinstance(s.object, PronounNP):
        obj = None if obj_bound is None else sr.matmul(
            emat, obj_bound.reshape(-1, 1)).reshape(-1)
    else:
        obj = _noun_array(s.object, enc, verbs)

    if subj is not None and obj is not None:
        return sr.sum(sr.mul(sr.mul(subj[:, None], square), obj[None, :]))
    if subj is not None:  # object wire open
        u = sr.sum(sr.mul(subj[:, None], square), axis=0)
        return sr.matmul(emat.T, u.reshape(-1, 1)).reshape(-1)
    if obj is not None:  # subject wire open
        t = sr.sum(sr.mul(square, obj[None, :]), axis=1)
        return sr.matmul(emat.T, t.reshape(-1, 1)).reshape(-1)
    # both open: E^T V E, subject axis first
    return sr.matmul(emat.T, sr.matmul(square, emat))


def sentence_effect(s: AtomicSentence, enc: EncodingMatrix,
                    verbs: VerbMatrix) -> Matrix:
    """Effect |E|^(a+b) -> 1 with wire order subject then object."""
    arr = _sentence_array(s, enc, verbs)
    ne = enc.vocab.n_entities
    dom = (ne,) * (s.a + s.b)
    return Matrix(enc.semiring, dom, (), np.asarray(arr).reshape(1, -1))


def discourse_effect(d: Discourse, enc: EncodingMatrix, verbs: VerbMatrix,
                     budget: int | None = None) -> Matrix:
    """Dense effect |E|^k -> 1: the tensor of the sentence effects."""
    sr = enc.semiring
    ne = enc.vocab.n_entities
    check_budget(ne ** d.k, budget)
    out = np.ones((1, 1), dtype=sr.dtype) * sr.one
    dom: tuple[int, ...] = ()
    for s in d.sentences:
        eff = sentence_effect(s, enc, verbs)
        out = sr.mul(out[:, :, None], eff.entries[:, None, :]).reshape(1, -1)
        dom = dom + eff.dom
    return Matrix(sr, dom, (), out)


def eval_sentence(s: AtomicSentence, enc: EncodingMatrix, verbs: VerbMatrix):
    """Scalar semantics of a pronoun-free sentence."""
    if s.a or s.b:
        raise GrammarError("sentence contains a pronoun")
    return np.asarray(_sentence_array(s, enc, verbs)).reshape(())[()]
