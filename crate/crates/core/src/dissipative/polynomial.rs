//! Real polynomials in ascending coefficient order.

use crate::scalar::{lit, Real};

pub(crate) fn eval<T: Real>(p: &[T], s: T) -> T {
    p.iter().rev().fold(T::zero(), |acc, &c| acc * s + c)
}

pub(crate) fn derivative<T: Real>(p: &[T]) -> Vec<T> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| T::from_usize(k).unwrap() * c)
        .collect()
}

pub(crate) fn trim<T: Real>(p: &[T]) -> &[T] {
    let len = p.iter().rposition(|&c| c != T::zero()).map_or(0, |i| i + 1);
    &p[..len]
}

/// All real roots, sorted, each listed once. Roots are isolated between
/// consecutive critical points (found recursively) and the Cauchy bound,
/// then refined by bisection to machine precision.
pub(crate) fn real_roots<T: Real>(p: &[T]) -> Vec<T> {
    let p = trim(p);
    match p.len() {
        0 | 1 => return Vec::new(),
        2 => return vec![-p[0] / p[1]],
        _ => {}
    }
    let lead = *p.last().unwrap();
    let bound = T::one() + p.iter().take(p.len() - 1).fold(T::zero(), |m, &c| m.max((c / lead).abs()));
    let mut knots = vec![-bound];
    knots.extend(real_roots(&derivative(p)).into_iter().filter(|c| c.abs() < bound));
    knots.push(bound);

    let mut roots: Vec<T> = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (eval(p, a), eval(p, b));
        let root = if fa == T::zero() {
            Some(a)
        } else if fb == T::zero() {
            Some(b)
        } else if (fa < T::zero()) != (fb < T::zero()) {
            Some(bisect(p, a, b, fa))
        } else {
            None
        };
        if let Some(r) = root {
            if roots.last().is_none_or(|&last| r != last) {
                roots.push(r);
            }
        }
    }
    roots
}

fn bisect<T: Real>(p: &[T], mut lo: T, mut hi: T, flo: T) -> T {
    let lo_negative = flo < T::zero();
    let half = lit::<T>(0.5);
    for _ in 0..4096 {
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = eval(p, mid);
        if fm == T::zero() {
            return mid;
        }
        if (fm < T::zero()) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if eval(p, lo).abs() <= eval(p, hi).abs() {
        lo
    } else {
        hi
    }
}

/// Global supremum over the real line of a polynomial of even degree with
/// negative leading coefficient (or of degree zero).
pub(crate) fn global_max<T: Real>(p: &[T]) -> Option<T> {
    let p = trim(p);
    match p.len() {
        0 => Some(T::zero()),
        1 => Some(p[0]),
        n if n % 2 == 1 && p[n - 1] < T::zero() => real_roots(&derivative(p))
            .into_iter()
            .map(|c| eval(p, c))
            .fold(None, |m: Option<T>, v| Some(m.map_or(v, |m| m.max(v)))),
        _ => None,
    }
}
