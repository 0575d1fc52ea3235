//! The polynomials `P_n` (a circle carrying `n` arrows) and `P_{n,k}`
//! (such a circle enclosing `x^k`), memoized for the lifetime of the process.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::{LaurentPoly, XPoly};

fn pn_table() -> &'static Mutex<HashMap<i64, XPoly>> {
    static T: OnceLock<Mutex<HashMap<i64, XPoly>>> = OnceLock::new();
    T.get_or_init(|| {
        let mut m = HashMap::new();
        m.insert(0, XPoly::constant(LaurentPoly::delta()));
        m.insert(1, XPoly::x());
        Mutex::new(m)
    })
}

fn pnk_table() -> &'static Mutex<HashMap<(i64, u32), XPoly>> {
    static T: OnceLock<Mutex<HashMap<(i64, u32), XPoly>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

fn lookup(n: i64) -> Option<XPoly> {
    pn_table().lock().unwrap().get(&n).cloned()
}

/// `P_n`, with `P_0 = -A^2-A^-2`, `P_1 = x`, `P_n = -A^-2 x P_{n-1} - A^2 P_{n-2}`.
///
/// For negative `n` the same relation is solved for the lowest index:
/// `P_n = -A^-4 x P_{n+1} - A^-2 P_{n+2}`.
pub fn p_n(n: i64) -> XPoly {
    if let Some(p) = lookup(n) {
        return p;
    }
    let x = XPoly::x();
    if n > 1 {
        let (mut prev2, mut prev1) = (p_n(0), p_n(1));
        for i in 2..=n {
            let next = match lookup(i) {
                Some(p) => p,
                None => {
                    let p = &(&x * &prev1).scale(&LaurentPoly::monomial(-1, -2))
                        - &prev2.scale(&LaurentPoly::a_pow(2));
                    pn_table().lock().unwrap().entry(i).or_insert(p).clone()
                }
            };
            prev2 = prev1;
            prev1 = next;
        }
        prev1
    } else {
        // n < 0
        let (mut next2, mut next1) = (p_n(1), p_n(0));
        for i in (n..0).rev() {
            let cur = match lookup(i) {
                Some(p) => p,
                None => {
                    let p = &(&x * &next1).scale(&LaurentPoly::monomial(-1, -4))
                        - &next2.scale(&LaurentPoly::a_pow(-2));
                    pn_table().lock().unwrap().entry(i).or_insert(p).clone()
                }
            };
            next2 = next1;
            next1 = cur;
        }
        next1
    }
}

/// `P_{n,k}`, with `P_{n,0} = P_n` and
/// `P_{n,k} = (-A^4+1) P_{n+1,k-1} + A^-2 x P_{n,k-1}`.
pub fn p_nk(n: i64, k: u32) -> XPoly {
    if k == 0 {
        return p_n(n);
    }
    if let Some(p) = pnk_table().lock().unwrap().get(&(n, k)) {
        return p.clone();
    }
    let a = p_nk(n + 1, k - 1).scale(&LaurentPoly::from_terms([(4, -1), (0, 1)]));
    let b = (&XPoly::x() * &p_nk(n, k - 1)).scale(&LaurentPoly::a_pow(-2));
    let p = &a + &b;
    pnk_table()
        .lock()
        .unwrap()
        .entry((n, k))
        .or_insert(p)
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(p_n(0).to_string(), "(-A^2-A^-2)");
        assert_eq!(p_n(1).to_string(), "x");
        assert_eq!(p_n(-1).to_string(), "A^-6*x");
        assert_eq!(p_n(2).to_string(), "(-A^-2)*x^2 + (A^4+1)");
        assert_eq!(p_nk(0, 1).to_string(), "(-A^4-A^-4)*x");
        assert_eq!(p_nk(1, 0), XPoly::x());
        for n in -5..5 {
            assert_eq!(p_nk(n, 0), p_n(n));
        }
    }

    #[test]
    fn degree_is_abs_n() {
        for n in -12i64..=12 {
            if n != 0 {
                assert_eq!(p_n(n).degree(), Some(n.unsigned_abs() as u32), "n={n}");
            }
        }
    }

    #[test]
    fn concurrent_callers_agree() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || (p_n(9 - i), p_nk(-3, 4))))
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for (i, (p, q)) in results.iter().enumerate() {
            assert_eq!(*p, p_n(9 - i as i64));
            assert_eq!(*q, results[0].1);
        }
    }
}
