"""Dataset container, LIBSVM text I/O, row normalization, and seeded sampling.

Feature rows are stored CSR-style (indptr/indices/values) when the matrix is
sparse, or as a plain 2-D array when dense. Datasets are immutable after
construction and safe to share between runs.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Dataset",
    "ParseError",
    "SamplingScheme",
    "uniform_scheme",
    "weighted_scheme",
    "parse_libsvm",
    "serialize_libsvm",
    "load_libsvm",
    "save_libsvm",
    "normalize_rows",
    "make_rng",
    "sample_index",
    "sample_minibatch",
    "gen_synthetic",
]

# Storage switches to a dense 2-D array above this fill fraction.
_DENSE_THRESHOLD = 0.5


class ParseError(ValueError):
    """Malformed LIBSVM input; carries the 1-based line number."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Dataset:
    """n samples (a_i, b_i) with a_i in R^d, plus cached row norms.

    Construct via :meth:`from_rows`, :meth:`from_dense`, or :func:`parse_libsvm`.
    """

    __slots__ = ("n", "d", "labels", "dense", "indptr", "indices", "values",
                 "row_norms")

    def __init__(self, n, d, labels, dense=None, indptr=None, indices=None,
                 values=None):
        if n < 1 or d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
        self.n = int(n)
        self.d = int(d)
        self.labels = np.ascontiguousarray(labels, dtype=np.float64)
        if self.labels.shape != (self.n,):
            raise ValueError("labels must have shape (n,)")
        self.dense = dense
        self.indptr = indptr
        self.indices = indices
        self.values = values
        if dense is not None:
            self.row_norms = np.sqrt(np.einsum("ij,ij->i", dense, dense))
        else:
            sq = values * values
            c = np.concatenate(([0.0], np.cumsum(sq)))
            self.row_norms = np.sqrt(c[indptr[1:]] - c[indptr[:-1]])
        for arr in (self.labels, self.dense, self.indptr, self.indices,
                    self.values, self.row_norms):
            if arr is not None:
                arr.flags.writeable = False

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows, labels, d=None):
        """Build from a list of (indices, values) pairs with 0-based indices."""
        n = len(rows)
        max_idx = -1
        for lineno, (idx, _) in enumerate(rows, start=1):
            idx = np.asarray(idx)
            if idx.size:
                if np.any(np.diff(idx) <= 0):
                    raise ParseError(lineno, "feature indices must be strictly increasing")
                if idx[0] < 0:
                    raise ParseError(lineno, "negative feature index")
                max_idx = max(max_idx, int(idx[-1]))
        if d is None:
            d = max_idx + 1 if max_idx >= 0 else 1
        elif max_idx >= d:
            raise ValueError(f"feature index {max_idx} out of range for d={d}")
        nnz = sum(len(idx) for idx, _ in rows)
        if nnz > _DENSE_THRESHOLD * n * d:
            X = np.zeros((n, d))
            for i, (idx, val) in enumerate(rows):
                X[i, np.asarray(idx, dtype=np.intp)] = val
            return cls(n, d, labels, dense=X)
        indptr = np.zeros(n + 1, dtype=np.intp)
        indices = np.empty(nnz, dtype=np.intp)
        values = np.empty(nnz)
        pos = 0
        for i, (idx, val) in enumerate(rows):
            k = len(idx)
            indices[pos:pos + k] = idx
            values[pos:pos + k] = val
            pos += k
            indptr[i + 1] = pos
        return cls(n, d, labels, indptr=indptr, indices=indices, values=values)

    @classmethod
    def from_dense(cls, X, labels):
        X = np.ascontiguousarray(X, dtype=np.float64)
        return cls(X.shape[0], X.shape[1], labels, dense=X)

    # -- row access --------------------------------------------------------

    @property
    def is_sparse(self):
        return self.dense is None

    def row(self, i):
        """Return (indices, values) for row i; indices is None for dense rows."""
        if self.dense is not None:
            return None, self.dense[i]
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.values[lo:hi]

    def row_dot(self, i, x):
        """a_i . x"""
        idx, val = self.row(i)
        if idx is None:
            return float(val @ x)
        return float(val @ x[idx])

    def add_row(self, out, i, coeff):
        """out += coeff * a_i, in place."""
        idx, val = self.row(i)
        if idx is None:
            out += coeff * val
        else:
            out[idx] += coeff * val

    def matvec(self, x):
        """A @ x, shape (n,)."""
        if self.dense is not None:
            return self.dense @ x
        prod = self.values * x[self.indices]
        c = np.concatenate(([0.0], np.cumsum(prod)))
        return c[self.indptr[1:]] - c[self.indptr[:-1]]

    def rmatvec(self, w):
        """A.T @ w, shape (d,)."""
        if self.dense is not None:
            return self.dense.T @ w
        wexp = np.repeat(w, np.diff(self.indptr))
        return np.bincount(self.indices, weights=self.values * wexp,
                           minlength=self.d)

    def to_dense(self):
        if self.dense is not None:
            return self.dense.copy()
        X = np.zeros((self.n, self.d))
        for i in range(self.n):
            lo, hi = self.indptr[i], self.indptr[i + 1]
            X[i, self.indices[lo:hi]] = self.values[lo:hi]
        return X

    @property
    def density(self):
        if self.dense is not None:
            return float(np.count_nonzero(self.dense)) / (self.n * self.d)
        return len(self.values) / (self.n * self.d)

    def __repr__(self):
        kind = "sparse" if self.is_sparse else "dense"
        return f"Dataset(n={self.n}, d={self.d}, {kind})"


# -- LIBSVM text format ----------------------------------------------------

def parse_libsvm(text, d=None):
    """Parse LIBSVM-format text (`<label> <idx>:<val> ...`, 1-based indices).

    Indices are shifted to 0-based. ``d`` overrides the inferred dimension.
    Raises :class:`ParseError` with the offending line number on bad input.
    """
    rows = []
    labels = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            labels.append(float(parts[0]))
        except ValueError:
            raise ParseError(lineno, f"bad label {parts[0]!r}") from None
        idx = []
        val = []
        prev = 0
        for tok in parts[1:]:
            try:
                k, v = tok.split(":", 1)
                k = int(k)
                v = float(v)
            except ValueError:
                raise ParseError(lineno, f"bad feature token {tok!r}") from None
            if k < 1:
                raise ParseError(lineno, f"feature index {k} must be >= 1")
            if k <= prev:
                raise ParseError(
                    lineno, f"feature index {k} not increasing (previous {prev})")
            prev = k
            idx.append(k - 1)
            val.append(v)
        rows.append((np.array(idx, dtype=np.intp), np.array(val)))
    if not rows:
        raise ParseError(0, "no samples found")
    return Dataset.from_rows(rows, np.array(labels), d=d)


def serialize_libsvm(ds):
    """Render a Dataset back to LIBSVM text (1-based indices).

    ``parse_libsvm(serialize_libsvm(ds))`` reproduces the dataset content;
    values are written with full round-trip precision.
    """
    lines = []
    for i in range(ds.n):
        idx, val = ds.row(i)
        if idx is None:
            idx = np.nonzero(val)[0]
            val = val[idx]
        toks = [f"{ds.labels[i]:.17g}"]
        toks += [f"{j + 1}:{v:.17g}" for j, v in zip(idx, val)]
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def load_libsvm(path, d=None):
    with open(path, "r", encoding="ascii") as fh:
        return parse_libsvm(fh.read(), d=d)


def save_libsvm(ds, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(serialize_libsvm(ds))


def normalize_rows(ds):
    """Scale every nonzero row to unit Euclidean norm; zero rows are kept."""
    nrm = ds.row_norms
    scale = np.where(nrm > 0, 1.0 / np.where(nrm > 0, nrm, 1.0), 1.0)
    if ds.dense is not None:
        return Dataset(ds.n, ds.d, ds.labels, dense=ds.dense * scale[:, None])
    sexp = np.repeat(scale, np.diff(ds.indptr))
    return Dataset(ds.n, ds.d, ds.labels, indptr=ds.indptr.copy(),
                   indices=ds.indices.copy(), values=ds.values * sexp)


# -- seeded sampling --------------------------------------------------------

def make_rng(seed):
    """Counter-based (Philox) generator; one independent stream per run."""
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True)
class SamplingScheme:
    """Index distribution for inner stochastic steps.

    kind is "uniform" (with replacement) or "weighted"; weighted schemes carry
    probabilities p_i > 0 summing to 1 and draw by inverse CDF.
    """

    kind: str
    weights: np.ndarray | None = None
    cum: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("uniform", "weighted"):
            raise ValueError(f"unknown sampling kind {self.kind!r}")
        if self.kind == "weighted":
            w = np.asarray(self.weights, dtype=np.float64)
            if np.any(w <= 0):
                raise ValueError("weights must be positive")
            if abs(w.sum() - 1.0) > 1e-12:
                raise ValueError("weights must sum to 1")
            object.__setattr__(self, "weights", w)
            object.__setattr__(self, "cum", np.cumsum(w))


def uniform_scheme():
    return SamplingScheme("uniform")


def weighted_scheme(weights):
    w = np.asarray(weights, dtype=np.float64)
    return SamplingScheme("weighted", weights=w / w.sum())


def sample_index(rng, scheme, n):
    """Draw one index in [0, n) under the scheme. Deterministic per stream."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if scheme.kind == "uniform":
        return int(rng.integers(0, n))
    if len(scheme.weights) != n:
        raise ValueError("weight vector length does not match n")
    u = rng.random()
    return int(np.searchsorted(scheme.cum, u, side="right"))


def sample_minibatch(rng, n, b):
    """b distinct indices from [0, n) (partial Fisher-Yates), sorted.

    Sorting fixes the accumulation order so that b=n estimates are independent
    of the seed bit-for-bit.
    """
    if not 1 <= b <= n:
        raise ValueError(f"batch size {b} out of range [1, {n}]")
    pool = np.arange(n)
    for k in range(b):
        j = k + int(rng.integers(0, n - k))
        pool[k], pool[j] = pool[j], pool[k]
    return np.sort(pool[:b])


# -- synthetic instances -----------------------------------------------------

def gen_synthetic(kind, n, d, seed=0, density=1.0):
    """Deterministic synthetic instance with unit-norm rows and +/-1 labels.

    kind selects the label rule: "ridge" and "logistic"/"sigmoid" all produce
    b_i = sign(a_i . w + noise) for a hidden w; regression-style losses consume
    the +/-1 targets directly.
    """
    if kind not in ("ridge", "logistic", "sigmoid"):
        raise ValueError(f"unknown synthetic kind {kind!r}")
    if not 0 < density <= 1:
        raise ValueError("density must be in (0, 1]")
    rng = make_rng(seed)
    w = rng.standard_normal(d)
    if density >= _DENSE_THRESHOLD:
        X = rng.standard_normal((n, d))
        if density < 1.0:
            X *= rng.random((n, d)) < density
        z = X @ w
        b = np.where(z + 0.1 * rng.standard_normal(n) >= 0, 1.0, -1.0)
        ds = Dataset.from_dense(X, b)
    else:
        k = max(1, int(round(density * d)))
        rows = []
        zs = np.empty(n)
        for i in range(n):
            idx = np.sort(rng.choice(d, size=k, replace=False))
            val = rng.standard_normal(k)
            rows.append((idx.astype(np.intp), val))
            zs[i] = val @ w[idx]
        b = np.where(zs + 0.1 * rng.standard_normal(n) >= 0, 1.0, -1.0)
        ds = Dataset.from_rows(rows, b, d=d)
    return normalize_rows(ds)
