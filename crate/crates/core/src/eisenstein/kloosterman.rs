use super::CuspPair;

/// Euler's totient by trial division.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            while n % q == 0 {
                n /= q;
            }
            out -= out / q;
        }
        q += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// Totients of `0..=m` by a linear sieve.
pub fn totient_sieve(m: usize) -> Vec<u32> {
    let mut phi = vec![0u32; m + 1];
    let mut primes: Vec<u32> = Vec::new();
    if m >= 1 {
        phi[1] = 1;
    }
    for i in 2..=m {
        if phi[i] == 0 {
            phi[i] = i as u32 - 1;
            primes.push(i as u32);
        }
        for &q in &primes {
            let iq = i * q as usize;
            if iq > m {
                break;
            }
            if i % q as usize == 0 {
                phi[iq] = phi[i] * q;
                break;
            }
            phi[iq] = phi[i] * (q - 1);
        }
    }
    phi
}

/// `S_{P,Q}(0, 0; c)`: the number of `d mod c` completing a bottom row `(c, d)`
/// in the relevant double coset.
pub fn kloosterman_zero(pair: CuspPair, c: u64, p: u64) -> u64 {
    assert!(c >= 1, "modulus must be positive");
    let p2 = p * p;
    match pair {
        CuspPair::InfInf if c % p2 == 0 => euler_phi(c),
        CuspPair::InfZero if c % p == 0 && c % p2 != 0 => euler_phi(c / p),
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(kloosterman_zero(CuspPair::InfInf, 121, 11), 110);
        assert_eq!(kloosterman_zero(CuspPair::InfInf, 22, 11), 0);
        assert_eq!(kloosterman_zero(CuspPair::InfZero, 33, 11), 2);
        assert_eq!(kloosterman_zero(CuspPair::InfZero, 121, 11), 0);
        assert_eq!(kloosterman_zero(CuspPair::InfZero, 7, 11), 0);
    }

    /// Brute-force count of `d mod c` with `gcd(c, d) = 1` for the `inf,inf` pair.
    #[test]
    fn inf_inf_counts_units() {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        let p = 3;
        for c in 1..=200u64 {
            let brute = if c % 9 == 0 {
                (0..c).filter(|&d| gcd(c, d) == 1).count() as u64
            } else {
                0
            };
            assert_eq!(kloosterman_zero(CuspPair::InfInf, c, p), brute);
        }
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let phi = totient_sieve(5000);
        for n in 1..=5000u64 {
            assert_eq!(phi[n as usize] as u64, euler_phi(n), "n = {n}");
        }
    }
}
