//! Exact zero test for `Σ c_t ζ_L^t` without materializing a basis of
//! `Q(ζ_L)`, by peeling one prime at a time.
//!
//! Let `p | L` and `m = L/p`.
//! * If `p | m`, then `1, ζ_L, …, ζ_L^{p-1}` is a basis of `Q(ζ_L)` over
//!   `Q(ζ_m)`; split `t = b + p·s` and require each `Σ_s c ζ_m^s` to vanish.
//! * Otherwise `ζ_L^t = ζ_p^a ζ_m^c` by CRT, `Φ_p` stays the minimal
//!   polynomial of `ζ_p` over `Q(ζ_m)`, and `Σ_a ζ_p^a S_a = 0` iff all
//!   `S_a` are equal.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::poly::prime_factors;

type Terms = BTreeMap<u64, i64>;

pub(crate) fn vanishes(level: u64, terms: Vec<(u64, i64)>) -> bool {
    let mut map = Terms::new();
    for (t, c) in terms {
        *map.entry(t % level).or_default() += c;
    }
    map.retain(|_, c| *c != 0);
    check(level, map)
}

fn check(level: u64, terms: Terms) -> bool {
    if terms.is_empty() {
        return true;
    }
    if level == 1 {
        return terms.values().sum::<i64>() == 0;
    }
    let p = *prime_factors(level)
        .last()
        .expect("level > 1 has a prime factor");
    let m = level / p;
    if m.is_multiple_of(p) {
        let mut parts: BTreeMap<u64, Terms> = BTreeMap::new();
        for (t, c) in terms {
            *parts.entry(t % p).or_default().entry(t / p).or_default() += c;
        }
        return parts.into_values().all(|s| check(m, cleaned(s)));
    }

    let inv_m = mod_inverse(m % p, p);
    let inv_p = mod_inverse(p % m.max(1), m.max(1));
    let mut parts: Vec<Terms> = vec![Terms::new(); p as usize];
    for (t, c) in terms {
        let a = ((t % p) as u128 * inv_m as u128 % p as u128) as usize;
        let s = if m == 1 {
            0
        } else {
            ((t % m) as u128 * inv_p as u128 % m as u128) as u64
        };
        *parts[a].entry(s).or_default() += c;
    }
    let parts: Vec<Terms> = parts.into_iter().map(cleaned).collect();
    if parts.iter().any(Terms::is_empty) {
        // One of the S_a is syntactically zero, so all of them must vanish.
        return parts.into_iter().all(|s| check(m, s));
    }
    let base = &parts[0];
    parts[1..].iter().all(|s| {
        let mut diff = s.clone();
        for (t, c) in base {
            *diff.entry(*t).or_default() -= c;
        }
        check(m, cleaned(diff))
    })
}

fn cleaned(mut t: Terms) -> Terms {
    t.retain(|_, c| *c != 0);
    t
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbits_vanish() {
        assert!(vanishes(6, vec![(0, 1), (2, 1), (4, 1)]));
        assert!(vanishes(4, vec![(1, 1), (3, 1)]));
        assert!(!vanishes(4, vec![(0, 1), (1, 1)]));
        assert!(vanishes(1, vec![(0, 2), (0, -2)]));
    }

    #[test]
    fn mixed_orbit_sum() {
        // (1 + ζ5 + … + ζ5^4) - (1 + ζ3 + ζ3^2) = 0 at level 15.
        let mut terms: Vec<(u64, i64)> = (0..5).map(|k| (3 * k, 1)).collect();
        terms.extend((0..3).map(|k| (5 * k, -1)));
        assert!(vanishes(15, terms));
    }
}
