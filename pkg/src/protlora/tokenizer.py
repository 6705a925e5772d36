"""Residue vocabulary, encoding, and masked-LM corruption."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

AMINO_ACIDS = "ACDEFGHIKLMNPQRSTVWY"
PAD, BOS, EOS, MASK, UNK = "<pad>", "<cls>", "<eos>", "<mask>", "<unk>"
SPECIALS = (PAD, BOS, EOS, MASK, UNK)


class Vocabulary:
    """Fixed token table: special tokens first, then the 20 canonical residues."""

    def __init__(self, tokens: list[str] | None = None):
        self.tokens = list(tokens) if tokens is not None else [*SPECIALS, *AMINO_ACIDS]
        if len(set(self.tokens)) != len(self.tokens):
            raise ValueError("vocabulary has duplicate tokens")
        missing = [t for t in SPECIALS if t not in self.tokens]
        if missing:
            raise ValueError(f"vocabulary lacks special tokens {missing}")
        self._index = {tok: i for i, tok in enumerate(self.tokens)}
        self.pad_id = self._index[PAD]
        self.bos_id = self._index[BOS]
        self.eos_id = self._index[EOS]
        self.mask_id = self._index[MASK]
        self.unk_id = self._index[UNK]
        self.residue_ids = np.array([self._index[a] for a in AMINO_ACIDS if a in self._index])

    def __len__(self) -> int:
        return len(self.tokens)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self.tokens == other.tokens

    def id(self, token: str) -> int:
        return self._index.get(token, self.unk_id)

    def save(self, path) -> None:
        Path(path).write_text("\n".join(self.tokens) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Vocabulary":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls([ln for ln in lines if ln])


DEFAULT_VOCAB = Vocabulary()


@dataclass
class TokenizedSequence:
    ids: np.ndarray  # BOS, residues..., EOS
    length: int
    n_unknown: int = 0


def encode(seq: str, vocab: Vocabulary = DEFAULT_VOCAB) -> TokenizedSequence:
    if not seq:
        raise ValueError("cannot encode an empty sequence")
    body = [vocab.id(ch) for ch in seq.upper()]
    n_unk = sum(1 for i in body if i == vocab.unk_id)
    ids = np.array([vocab.bos_id, *body, vocab.eos_id], dtype=np.int64)
    return TokenizedSequence(ids=ids, length=len(seq), n_unknown=n_unk)


def decode(ids, vocab: Vocabulary = DEFAULT_VOCAB) -> str:
    """Residue string for a token id sequence; special tokens other than UNK are dropped."""
    out = []
    for i in np.asarray(ids).tolist():
        tok = vocab.tokens[i]
        if tok == UNK:
            out.append("X")
        elif tok not in SPECIALS:
            out.append(tok)
    return "".join(out)


def mask_for_mlm(
    tokens: TokenizedSequence,
    rate: float,
    rng: np.random.Generator,
    vocab: Vocabulary = DEFAULT_VOCAB,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Corrupt ``round(rate * L)`` residue positions (at least one) with MASK.

    Returns ``(masked_ids, targets, selected)``; ``targets`` holds the original
    id at selected positions and PAD elsewhere.
    """
    if not 0.0 < rate < 1.0:
        raise ValueError(f"mask rate must lie in (0, 1), got {rate}")
    n = tokens.length
    k = max(1, int(round(rate * n)))
    positions = 1 + rng.choice(n, size=k, replace=False)
    selected = np.zeros(tokens.ids.shape, dtype=bool)
    selected[positions] = True
    masked = tokens.ids.copy()
    masked[selected] = vocab.mask_id
    targets = np.full_like(tokens.ids, vocab.pad_id)
    targets[selected] = tokens.ids[selected]
    return masked, targets, selected
