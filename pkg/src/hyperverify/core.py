"""Gamma-function plumbing and parameter-vector helpers.

log_gamma uses a fixed rational Lanczos approximation (g ~ 6.0247, 13 terms)
on Re z >= 1/2 and upward recurrence elsewhere, so the result is the
principal branch that is continuous off the negative real axis.
"""
import cmath
import math
from dataclasses import dataclass

from .errors import PoleError

LANCZOS_G = 6.024680040776729583740234375

# exp(-g)-scaled numerator/denominator, highest power first.
_NUM = (
    0.006061842346248906525783753964555936883222,
    0.5098416655656676188125178644804694509993,
    19.51992788247617482847860966235652136208,
    449.9445569063168119446858607650988409623,
    6955.999602515376140356310115515198987526,
    75999.29304014542649875303443598909137092,
    601859.6171681098786670226533699352302507,
    3481712.15498064590882071018964774556468,
    14605578.08768506808414169982791359218571,
    43338889.32467613834773723740590533316085,
    86363131.28813859145546927288977868422342,
    103794043.1163445451906271053616070238554,
    56906521.91347156388090791033559122686859,
)
_DEN = (1.0, 66.0, 1925.0, 32670.0, 357423.0, 2637558.0, 13339535.0,
        45995730.0, 105258076.0, 150917976.0, 120543840.0, 39916800.0, 0.0)


class ParameterVector(tuple):
    """Immutable ordered vector of real parameters."""

    def __new__(cls, entries=()):
        if isinstance(entries, (int, float)):
            entries = (entries,)
        return super().__new__(cls, (float(x) for x in entries))

    @property
    def length(self):
        return len(self)

    def sorted_ascending(self):
        return ParameterVector(sorted(self))

    def with_removed(self, k):
        return ParameterVector(self[:k] + self[k + 1:])

    def shifted(self, mu):
        return ParameterVector(x + mu for x in self)

    def scaled(self, c):
        return ParameterVector(x * c for x in self)

    def concat(self, other):
        return ParameterVector(tuple(self) + tuple(pvec(other)))

    def __repr__(self):
        return f"ParameterVector({list(self)})"


def pvec(x):
    if isinstance(x, ParameterVector):
        return x
    if x is None:
        return ParameterVector()
    return ParameterVector(x)


def is_pole(x):
    """True when x is a nonpositive integer (real or real-valued complex)."""
    if isinstance(x, complex):
        if x.imag != 0.0:
            return False
        x = x.real
    return x <= 0.0 and x == math.floor(x)


def _lanczos_log(z):
    # z complex with Re z >= 1/2
    if abs(z) < 5.0:
        num = 0j
        den = 0j
        for c in _NUM:
            num = num * z + c
        for c in _DEN:
            den = den * z + c
    else:
        w = 1.0 / z
        num = 0j
        den = 0j
        for c in reversed(_NUM):
            num = num * w + c
        for c in reversed(_DEN):
            den = den * w + c
    zgh = z + LANCZOS_G - 0.5
    return cmath.log(num / den) + (z - 0.5) * (cmath.log(zgh) - 1.0)


def log_gamma(z):
    """Principal branch of log Gamma(z) as a complex number."""
    z = complex(z)
    if is_pole(z):
        raise PoleError(z.real)
    if z.real >= 0.5:
        return _lanczos_log(z)
    n = int(math.ceil(0.5 - z.real))
    acc = 0j
    w = z
    for _ in range(n):
        acc += cmath.log(w)
        w += 1.0
    return _lanczos_log(w) - acc


def log_gamma_signed(x):
    """(log|Gamma(x)|, sign Gamma(x)) for real x."""
    x = float(x)
    if is_pole(x):
        raise PoleError(x)
    lg = log_gamma(x).real
    if x > 0:
        return lg, 1
    return lg, (1 if math.floor(x) % 2 == 0 else -1)


def gamma(z):
    if isinstance(z, complex) and z.imag != 0.0:
        return cmath.exp(log_gamma(z))
    lg, s = log_gamma_signed(z.real if isinstance(z, complex) else z)
    return s * math.exp(lg)


def rgamma(x):
    """Reciprocal gamma, zero at the poles."""
    if isinstance(x, complex) and x.imag != 0.0:
        return cmath.exp(-log_gamma(x))
    x = x.real if isinstance(x, complex) else float(x)
    if is_pole(x):
        return 0.0
    lg, s = log_gamma_signed(x)
    return s * math.exp(-lg)


def gamma_ratio(num, den, den_poles="raise"):
    """prod Gamma(num) / prod Gamma(den), accumulated in log space.

    den_poles="zero" returns 0 when a denominator entry hits a pole
    (reciprocal-gamma convention); numerator poles always raise.
    """
    num = list(num)
    den = list(den)
    if any(isinstance(v, complex) and v.imag != 0.0 for v in num + den):
        acc = sum(log_gamma(v) for v in num) - sum(
            (log_gamma(v) for v in den), 0j)
        return cmath.exp(acc)
    total = 0.0
    sign = 1
    for v in num:
        lg, s = log_gamma_signed(v.real if isinstance(v, complex) else v)
        total += lg
        sign *= s
    for v in den:
        v = v.real if isinstance(v, complex) else v
        if is_pole(v):
            if den_poles == "zero":
                return 0.0
            raise PoleError(v)
        lg, s = log_gamma_signed(v)
        total -= lg
        sign *= s
    return sign * math.exp(total)


def pochhammer(a, n):
    """(a)_n = prod_k Gamma(a_k + n)/Gamma(a_k), by direct multiplication."""
    if n < 0 or int(n) != n:
        raise ValueError("order must be a nonnegative integer")
    a = pvec(a)
    for v in a:
        if is_pole(v):
            raise PoleError(v)
    out = 1.0
    for v in a:
        for k in range(int(n)):
            out *= v + k
    return out


def first_product(a):
    """The bare product prod a_k, i.e. (a)_1."""
    out = 1.0
    for v in a:
        out *= v
    return out


@dataclass(frozen=True)
class PochhammerProduct:
    base: ParameterVector
    order: int
    value: float

    @classmethod
    def of(cls, a, n):
        a = pvec(a)
        return cls(a, int(n), pochhammer(a, n))


def delta_vector(c, k):
    """Delta(c, k) = (c/k, (c+1)/k, ..., (c+k-1)/k) for each entry of c."""
    if k < 1:
        raise ValueError("k must be >= 1")
    c = pvec(c)
    return ParameterVector((ci + j) / k for ci in c for j in range(k))


def integer_separated(u, v, thresh):
    d = u - v
    return abs(d - round(d)) < thresh


def clusters(values, thresh):
    """Group indices whose entries differ pairwise-transitively by integers."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if integer_separated(values[i], values[j], thresh):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [g for g in groups.values() if len(g) > 1]
