"""Column-sparse exact matrices: each column is a dict row -> nonzero scalar."""


def vec_add(acc, vec, coeff, field):
    """acc += coeff * vec, in place, dropping zeros."""
    for r, v in vec.items():
        x = field.reduce(acc.get(r, 0) + coeff * v)
        if x:
            acc[r] = x
        else:
            acc.pop(r, None)
    return acc


def vec_clean(vec, field):
    out = {}
    for r, v in vec.items():
        v = field.reduce(v)
        if v:
            out[r] = v
    return out


class Matrix:
    def __init__(self, nrows, ncols, cols, field):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols
        self.field = field

    @classmethod
    def zero(cls, nrows, ncols, field):
        return cls(nrows, ncols, [{} for _ in range(ncols)], field)

    @classmethod
    def identity(cls, n, field):
        return cls(n, n, [{i: 1} for i in range(n)], field)

    @classmethod
    def from_dense(cls, rows, field):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                v = field.reduce(v)
                if v:
                    cols[j][i] = v
        return cls(nrows, ncols, cols, field)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def nnz(self):
        return sum(len(c) for c in self.cols)

    def entry(self, i, j):
        return self.cols[j].get(i, 0)

    def to_dense(self):
        rows = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        f = self.field
        cols = []
        for col in other.cols:
            acc = {}
            for k, v in col.items():
                left = self.cols[k]
                if left:
                    vec_add(acc, left, v, f)
            cols.append(acc)
        return Matrix(self.nrows, other.ncols, cols, f)

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        f = self.field
        cols = []
        for a, b in zip(self.cols, other.cols):
            acc = dict(a)
            vec_add(acc, b, sign, f)
            cols.append(acc)
        return Matrix(self.nrows, self.ncols, cols, f)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c):
        f = self.field
        c = f.reduce(c)
        if not c:
            return Matrix.zero(self.nrows, self.ncols, f)
        return Matrix(self.nrows, self.ncols,
                      [{i: f.reduce(c * v) for i, v in col.items()} for col in self.cols], f)

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self):
        return not any(self.cols)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.cols == other.cols

    def transpose(self):
        cols = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                cols[i][j] = v
        return Matrix(self.ncols, self.nrows, cols, self.field)

    def first_nonzero_column(self):
        for j, col in enumerate(self.cols):
            if col:
                return j
        return None

    def power(self, k):
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        out = Matrix.identity(self.nrows, self.field)
        for _ in range(k):
            out = self @ out
        return out

    def submatrix_rows(self, keep):
        """Rows restricted (and renumbered) to the sorted list `keep`."""
        pos = {r: i for i, r in enumerate(keep)}
        cols = [{pos[r]: v for r, v in col.items() if r in pos} for col in self.cols]
        return Matrix(len(keep), self.ncols, cols, self.field)

    def select_columns(self, keep):
        return Matrix(self.nrows, len(keep), [self.cols[j] for j in keep], self.field)
