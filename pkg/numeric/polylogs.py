"""
Численные значения полилогарифмов на mpmath.

Точность задаётся NumericConfig.precision (десятичные знаки); все функции
работают внутри mpmath.workdps и возвращают числа mpmath.

Соглашения:
    Li_{n1..nd}(z1..zd) = Σ_{m1 > ... > md > 0} z1^m1/m1^n1 ... zd^md/md^nd  (убывающий ряд);
    атом Li(n1..nd)[z1..zd] языка тождеств - возрастающий ряд, то есть
    убывающий с обращёнными индексами и аргументами;
    разрез Li_n по [1, ∞), на разрезе берётся значение снизу (z - i0).
"""
import logging
import math
from typing import Any, Optional, Sequence

import mpmath

from exceptions import OnBranchPoint, OnSingularPoint, OutOfConvergenceDomain
from models import NumericConfig

logger = logging.getLogger(__name__)

_SERIES_LIMIT = 2_000_000


def _to_mp(z: Any):
    if isinstance(z, (mpmath.mpf, mpmath.mpc)):
        return z
    if hasattr(z, "numerator") and hasattr(z, "denominator"):
        return mpmath.mpf(z.numerator) / z.denominator
    return mpmath.mpmathify(z)


def series_order(ratio: float, depth: int, tolerance: float) -> int:
    """
    Наименьшее N с хвостом r^N N^(d-1) / (1 - r) < τ/10.

    Raises:
        OutOfConvergenceDomain: если r >= 1
    """
    if ratio >= 1:
        raise OutOfConvergenceDomain(f"отношение ряда {ratio} >= 1")
    if ratio == 0:
        return 1
    log_r = math.log(ratio)
    target = math.log(tolerance / 10) + math.log(1 - ratio)
    n = 1
    while n * log_r + (depth - 1) * math.log(n) >= target:
        n += 1
        if n > _SERIES_LIMIT:
            raise OutOfConvergenceDomain(f"ряд требует больше {_SERIES_LIMIT} членов")
    return n


def eval_mpl_series(indices: Sequence[int], args: Sequence[Any], cfg: NumericConfig):
    """
    Усечённый вложенный ряд для Li_{n1..nd}(z1..zd) в убывающем соглашении.

    Args:
        indices: Индексы n1..nd
        args: Аргументы z1..zd
        cfg: Точность, допуск и ε

    Returns:
        Комплексное (или вещественное) значение mpmath

    Raises:
        OutOfConvergenceDomain: если какое-то |z1...zk| > 1 - ε
    """
    if len(indices) != len(args) or not indices:
        raise ValueError(f"индексов {len(indices)}, аргументов {len(args)}")
    with mpmath.workdps(cfg.precision + 10):
        zs = [_to_mp(z) for z in args]
        eps = float(cfg.epsilon)
        prefix, ratio = mpmath.mpf(1), 0.0
        for z in zs:
            prefix *= abs(z)
            if prefix > 1 - eps:
                raise OutOfConvergenceDomain(
                    f"Li{tuple(indices)}: произведение модулей {mpmath.nstr(prefix, 8)} > 1 - {cfg.epsilon}")
            ratio = max(ratio, float(prefix))
        depth = len(zs)
        n_terms = series_order(ratio, depth, float(mpmath.mpf(10) ** -cfg.tolerance_exp))
        logger.debug(f"Li{tuple(indices)}: {n_terms} членов ряда")
        # partial[j]: сумма по m_j < m вложенных сумм с j-го индекса по последний
        partial = [mpmath.mpf(0)] * depth
        powers = [mpmath.mpf(1)] * depth
        for m in range(1, n_terms + depth):
            for j in range(depth):
                powers[j] *= zs[j]
                tail = 1 if j == depth - 1 else partial[j + 1]
                partial[j] += powers[j] / mpmath.mpf(m) ** indices[j] * tail
        return +partial[0]


def eval_li_classical(n: int, z: Any, cfg: NumericConfig, side: int = -1):
    """
    Li_n(z) на главной ветви с разрезом [1, ∞).

    Args:
        n: Вес
        z: Аргумент
        cfg: Точность
        side: Сторона разреза для вещественного z > 1: -1 снизу, +1 сверху

    Raises:
        OnBranchPoint: для Li_1(1)
    """
    with mpmath.workdps(cfg.precision + 10):
        z = _to_mp(z)
        if n == 1 and z == 1:
            raise OnBranchPoint("Li_1(1) расходится")
        value = mpmath.polylog(n, z)
        if side > 0 and mpmath.im(z) == 0 and mpmath.re(z) > 1:
            value = mpmath.conj(value)
        return value


def eval_li_increasing(indices: Sequence[int], args: Sequence[Any], cfg: NumericConfig):
    """Атом Li(n1..nd)[z1..zd]: убывающий ряд с обращённым порядком."""
    if len(indices) == 1:
        return eval_li_classical(indices[0], args[0], cfg)
    return eval_mpl_series(tuple(reversed(indices)), tuple(reversed(args)), cfg)


def eval_sv(m: int, z: Any, cfg: NumericConfig):
    """
    Однозначный полилогарифм P_m(z) в нормировке Загира.

    P_m(z) = Re_m Σ_{k<m} 2^k B_k / k! log^k|z| Li_{m-k}(z), B_1 = -1/2,
    Re_m - вещественная часть при нечётном m и мнимая при чётном.

    Raises:
        OnSingularPoint: при z = 0 или z = 1
    """
    with mpmath.workdps(cfg.precision + 10):
        z = _to_mp(z)
        if z == 0 or z == 1:
            raise OnSingularPoint(f"P_{m}({z})")
        log_abs = mpmath.log(abs(z))
        total = mpmath.mpf(0)
        for k in range(m):
            coeff = mpmath.mpf(2) ** k * mpmath.bernoulli(k) / mpmath.factorial(k)
            if coeff == 0:
                continue
            total += coeff * log_abs ** k * mpmath.polylog(m - k, z)
        return mpmath.re(total) if m % 2 else mpmath.im(total)


def eval_g(letters: Sequence[Any], z: Any, cfg: NumericConfig):
    """
    G(a1..an; z) для форм G(0^n; z) и G(0^k, a; z).

    G(0^n; z) = log^n z / n!, G(0^k, a; z) = -Li_{k+1}(z/a).

    Raises:
        OutOfConvergenceDomain: для прочих форм
    """
    with mpmath.workdps(cfg.precision + 10):
        z = _to_mp(z)
        letters = [_to_mp(a) for a in letters]
        n = len(letters)
        if all(a == 0 for a in letters):
            return mpmath.log(z) ** n / mpmath.factorial(n)
        if all(a == 0 for a in letters[:-1]):
            return -mpmath.polylog(n, z / letters[-1])
        raise OutOfConvergenceDomain(f"форма G{tuple(letters)} не поддерживается")


def eval_g_quadrature(k: int, a: Any, y: Any, cfg: NumericConfig):
    """Контрольное значение G(0^k, a; y) = ∫_0^y log^k(y/t)/k! dt/(t - a)."""
    with mpmath.workdps(cfg.precision + 10):
        a, y = _to_mp(a), _to_mp(y)
        f = lambda t: mpmath.log(y / t) ** k / mpmath.factorial(k) / (t - a)
        return mpmath.quad(f, [0, y])


def _side(v) -> int:
    im = mpmath.im(v)
    return 1 if im > 0 else -1


def eval_i_depth2(n1: int, n2: int, x: Any, y: Any, cfg: NumericConfig,
                  sides: Optional[Sequence[int]] = None):
    """
    I_{n1,n2}(x, y) = -∫_0^1 Li_{n1}(t/x) log^{n2-1}(1/t)/(n2-1)! dt/(t - y).

    Для вещественного y из (0, 1) берётся главное значение плюс iπ·s·f(y),
    где s - сторона y; сторона x задаёт ветвь Li_{n1}(t/x) при t > x.

    Args:
        sides: Стороны (s_x, s_y); по умолчанию - знаки мнимых частей
    """
    with mpmath.workdps(cfg.precision + 10):
        x, y = _to_mp(x), _to_mp(y)
        sx, sy = sides if sides is not None else (_side(x), _side(y))
        xr = mpmath.re(x) if abs(mpmath.im(x)) < mpmath.mpf(10) ** (-cfg.precision // 2) else x
        yr = mpmath.re(y) if abs(mpmath.im(y)) < mpmath.mpf(10) ** (-cfg.precision // 2) else y
        fact = mpmath.factorial(n2 - 1)

        def f(t):
            if t == 0:
                return mpmath.mpf(0)
            return -eval_li_classical(n1, t / xr, cfg, side=-sx) * mpmath.log(1 / t) ** (n2 - 1) / fact

        points = [mpmath.mpf(0)]
        if mpmath.im(xr) == 0 and 0 < xr < 1:
            points.append(xr)
        on_path = mpmath.im(yr) == 0 and 0 < yr < 1
        if not on_path:
            points.append(mpmath.mpf(1))
            return mpmath.quad(lambda t: f(t) / (t - yr), sorted(set(points)))
        fy = f(yr)
        points.extend([yr, mpmath.mpf(1)])
        regular = mpmath.quad(lambda t: (f(t) - fy) / (t - yr) if t != yr else mpmath.mpf(0),
                              sorted(set(points)))
        principal = regular + fy * mpmath.log((1 - yr) / yr)
        return principal + sy * mpmath.mpc(0, mpmath.pi) * fy


def eval_i_series(indices: Sequence[int], args: Sequence[Any], cfg: NumericConfig):
    """
    I_{n1..nd}(a1..ad) = (-1)^d Li^dec_{nd..n1}(1/ad, ad/a_{d-1}, ..., a2/a1).

    Raises:
        OutOfConvergenceDomain: если некоторое |ai| <= 1
    """
    with mpmath.workdps(cfg.precision + 10):
        a = [_to_mp(v) for v in args]
        d = len(a)
        zs = [1 / a[-1]] + [a[i] / a[i - 1] for i in range(d - 1, 0, -1)]
        sign = -1 if d % 2 else 1
        if d == 1:
            return sign * eval_li_classical(indices[0], zs[0], cfg)
        return sign * eval_mpl_series(tuple(reversed(indices)), zs, cfg)
