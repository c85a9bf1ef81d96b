//! Quick identity suites behind `ecrank verify`.

use ecrank_core::arith::{self, ResidueTable};
use ecrank_core::curves::{self, SigmaRow};
use ecrank_core::{moments, oracles, twists, weights, SmoothWeight};

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

type Check = Result<(), String>;
type Suite = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn arith_suite() -> Check {
    let primes = arith::sieve_primes(200);
    for p in primes.iter().filter(|&p| p > 2) {
        for a in -30i64..=30 {
            let (l, k) = (arith::legendre(a, p), arith::kronecker_symbol(a, p as i64));
            ensure(l == k, || format!("legendre({a}, {p}) = {l} but kronecker = {k}"))?;
        }
        let g = arith::gauss_sum(p).norm_sqr();
        ensure((g - p as f64).abs() < 1e-8 * p as f64, || format!("|tau({p})|^2 = {g}"))?;
    }
    for b in 1..=60u64 {
        for a in -60i64..=60 {
            let z = oracles::ramanujan_exponential_oracle(a, b).map_err(|e| e.to_string())?;
            let c = arith::ramanujan_sum(a, b) as f64;
            ensure((z.re - c).abs() < 1e-9 && z.im.abs() < 1e-9, || format!("c_{b}({a}) = {c} vs {z}"))?;
        }
    }
    Ok(())
}

fn curves_suite() -> Check {
    for p in arith::sieve_primes(41).range(5, 41).iter().copied() {
        let table = ResidueTable::new(p);
        for r in -6i64..=6 {
            let row = SigmaRow::new(r, &table, 13);
            for s in -6i64..=6 {
                if curves::discriminant(r, s).map_err(|e| e.to_string())? == 0 {
                    continue;
                }
                let direct = curves::sigma_p(r, s, p).map_err(|e| e.to_string())?;
                let chars = curves::sigma_p_charsum(r, s, p).map_err(|e| e.to_string())?;
                ensure(direct == chars && direct == row.sigma(s), || format!("sigma_{p}({r}, {s}) disagrees"))?;
                ensure(direct * direct <= 4 * p as i64, || format!("Hasse bound fails at ({r}, {s}) mod {p}"))?;
            }
        }
    }
    Ok(())
}

fn weights_suite() -> Check {
    let tri = SmoothWeight::triangle();
    for i in 0..=20 {
        let t = -3.0 + 0.3 * i as f64;
        let q = weights::fourier_numeric(&tri, t).map_err(|e| e.to_string())?;
        let c = weights::h_hat(t);
        ensure((q.re - c).abs() < 1e-8 && q.im.abs() < 1e-8, || format!("h^({t}) = {c} vs quadrature {q}"))?;
    }
    for x in [10.0, 100.0] {
        let k = SmoothWeight::kernel(x);
        for t in [0.0, 0.37, 1.5, 4.2] {
            let q = weights::fourier_numeric(&k, t).map_err(|e| e.to_string())?;
            let c = weights::kernel_k_hat(t, x);
            ensure((q.re - c).abs() < 1e-8, || format!("k^({t}; {x}) = {c} vs quadrature {}", q.re))?;
        }
    }
    Ok(())
}

fn oracles_suite() -> Check {
    let s11 = oracles::gcd_sum_s(1, 1).map_err(|e| e.to_string())?.s;
    let s22 = oracles::gcd_sum_s(2, 2).map_err(|e| e.to_string())?.s;
    ensure(s11 == 3 && s22 == 29, || format!("S(1,1) = {s11}, S(2,2) = {s22}"))?;
    for (u, v) in [(5, 7), (10, 10), (12, 3)] {
        let a = oracles::gcd_sum_s(u, v).map_err(|e| e.to_string())?.s;
        let b = oracles::gcd_sum_s_v_outer(u, v).map_err(|e| e.to_string())?.s;
        ensure(a == b, || format!("S({u},{v}) loop orders disagree: {a} vs {b}"))?;
    }
    for e in 0..=60 {
        for f in 0..=e {
            ensure(oracles::floor_inequality(e, f).map_err(|e| e.to_string())?, || {
                format!("floor inequality fails at ({e}, {f})")
            })?;
        }
    }
    Ok(())
}

fn twists_suite() -> Check {
    for p in [5u64, 7, 11] {
        for b in [1u64, 8] {
            twists::poisson_twist_check(&weights::bump(1.0, 2.0), b, p, 40.0)
                .map_err(|e| format!("Poisson check b = {b}, p = {p}: {e}"))?;
        }
    }
    for d in (-2000i64..=2000).filter(|&d| arith::is_fundamental_discriminant(d) && d != 1) {
        let dec = twists::class_decompose(d).map_err(|e| e.to_string())?;
        let c = dec.class;
        let back = i64::from(c.delta) * (1i64 << c.e) * dec.n_hat as i64;
        ensure(back == d, || format!("class decomposition of {d} recombines to {back}"))?;
    }
    Ok(())
}

fn moments_suite() -> Check {
    let e = [2u32, 1, 1];
    let c = moments::multinomial_c(&e).map_err(|e| e.to_string())?;
    ensure(c == 12, || format!("multinomial(2,1,1) = {c}"))?;
    let table = moments::VTable::new(300.0, 150.0).map_err(|e| e.to_string())?;
    let threshold = moments::rank_threshold(300.0, 150.0);
    let rank = threshold.ceil() + 1.0;
    let bound = table.density_bound(1, rank).map_err(|e| e.to_string())?;
    let lambda = 0.5 * 300f64.ln();
    let frac = table.count_at_least(lambda) as f64 / table.count_c as f64;
    ensure(frac <= bound + 1e-12, || format!("Markov bound {bound} below observed share {frac}"))
}

pub fn run_all() -> Vec<SuiteResult> {
    let suites: [Suite; 6] = [
        ("arith", arith_suite),
        ("curves", curves_suite),
        ("weights", weights_suite),
        ("oracles", oracles_suite),
        ("twists", twists_suite),
        ("moments", moments_suite),
    ];
    suites.into_iter().map(|(name, f)| SuiteResult { name, outcome: f() }).collect()
}
