//! Small statistics toolbox for the empirical checks: chi-square
//! goodness-of-fit, binomial standard deviations, and summary helpers.
//!
//! The chi-square survival function is computed from the regularized
//! incomplete gamma function (series/continued-fraction split, Lanczos
//! log-gamma), so no external stats dependency is needed.

/// ln Γ(x) for x > 0, Lanczos approximation (g = 7, n = 9).
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma P(a, x).
fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // series representation
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut n = a;
        for _ in 0..500 {
            n += 1.0;
            term *= x / n;
            sum += term;
            if term.abs() < sum.abs() * 1e-15 {
                break;
            }
        }
        sum * (-x + a * x.ln() - ln_gamma(a)).exp()
    } else {
        // continued fraction for Q(a, x), Lentz's method
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-15 {
                break;
            }
        }
        1.0 - h * (-x + a * x.ln() - ln_gamma(a)).exp()
    }
}

/// Chi-square survival function: Pr[X ≥ stat] for X ~ χ²(df).
pub fn chi2_sf(stat: f64, df: usize) -> f64 {
    assert!(df >= 1);
    if stat <= 0.0 {
        return 1.0;
    }
    1.0 - gamma_p(df as f64 / 2.0, stat / 2.0)
}

/// Pearson goodness-of-fit statistic for observed counts against exact
/// probabilities. Returns (statistic, degrees of freedom). Cells whose
/// expected count falls below `min_expected` are pooled into one bucket.
pub fn chi2_gof(observed: &[u64], probs: &[f64], min_expected: f64) -> (f64, usize) {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let n = total as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    let mut pool_obs = 0.0;
    let mut pool_exp = 0.0;
    for (&o, &p) in observed.iter().zip(probs) {
        let e = n * p;
        if e < min_expected {
            pool_obs += o as f64;
            pool_exp += e;
        } else {
            stat += (o as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    if pool_exp > 0.0 {
        stat += (pool_obs - pool_exp).powi(2) / pool_exp;
        cells += 1;
    }
    (stat, cells.saturating_sub(1).max(1))
}

/// Two-sample chi-square homogeneity statistic over matched count vectors.
/// Low-count cells (combined expectation under the pooled estimate below
/// `min_expected`) are pooled. Returns (statistic, degrees of freedom).
pub fn chi2_two_sample(a: &[u64], b: &[u64], min_expected: f64) -> (f64, usize) {
    assert_eq!(a.len(), b.len());
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let (na, nb) = (na as f64, nb as f64);
    let total = na + nb;
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pa, mut pb) = (0.0, 0.0);
    let flush = |oa: f64, ob: f64, stat: &mut f64, cells: &mut usize| {
        let pooled = (oa + ob) / total;
        let (ea, eb) = (na * pooled, nb * pooled);
        if ea > 0.0 {
            *stat += (oa - ea).powi(2) / ea;
        }
        if eb > 0.0 {
            *stat += (ob - eb).powi(2) / eb;
        }
        *cells += 1;
    };
    for (&oa, &ob) in a.iter().zip(b) {
        let pooled_exp = (oa + ob) as f64 * na.min(nb) / total;
        if pooled_exp < min_expected {
            pa += oa as f64;
            pb += ob as f64;
        } else {
            flush(oa as f64, ob as f64, &mut stat, &mut cells);
        }
    }
    if pa + pb > 0.0 {
        flush(pa, pb, &mut stat, &mut cells);
    }
    (stat, cells.saturating_sub(1).max(1))
}

/// Standard deviation of an empirical frequency: sqrt(p(1−p)/trials).
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Median with the lower-middle convention for even lengths.
pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[(v.len() - 1) / 2]
}
