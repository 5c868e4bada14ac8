//! Small number-theoretic helpers.

use num_integer::Integer;

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exponent of `p` in `n` (n > 0).
pub fn valuation(mut n: i128, p: i128) -> u32 {
    let mut v = 0;
    n = n.abs();
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let g = a.rem_euclid(m).extended_gcd(&m);
    (g.gcd == 1).then(|| g.x.rem_euclid(m))
}

/// Legendre symbol (a/p) for an odd prime p; 0 when p | a.
pub fn legendre(a: i128, p: i128) -> i32 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut result = 1i128;
    let mut base = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// The character on p-adic units modulo squares used for spinor norms:
/// the Legendre symbol for odd p, and m mod 4 read as ±1 for p = 2.
pub fn chi(p: u64, m: i128) -> i32 {
    if p == 2 {
        assert!(m % 2 != 0, "chi_2 of an even number");
        if m.rem_euclid(4) == 1 {
            1
        } else {
            -1
        }
    } else {
        let l = legendre(m, p as i128);
        assert!(l != 0, "chi_p of a non-unit");
        l
    }
}

/// Unit part of n at p (n with all factors p removed), sign kept.
pub fn unit_part(mut n: i128, p: i128) -> i128 {
    assert!(n != 0);
    while n % p == 0 {
        n /= p;
    }
    n
}

/// Square class of a p-adic unit: ±1 for odd p (Legendre symbol), residue in {1,3,5,7} for p = 2.
pub fn unit_square_class(u: i128, p: u64) -> i64 {
    if p == 2 {
        u.rem_euclid(8) as i64
    } else {
        i64::from(legendre(u, p as i128))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_table_mod_5_and_7() {
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(4, 5), 1);
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(-3, 7), 1);
        assert_eq!(legendre(-6, 7), 1);
        assert_eq!(legendre(3, 7), -1);
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(valuation(-40, 2), 3);
        assert_eq!(mod_inverse(3, 8), Some(3));
        assert_eq!(chi(2, 7), -1);
        assert_eq!(chi(2, 5), 1);
    }
}
