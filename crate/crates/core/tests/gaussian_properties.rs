mod common;

use chanskew::asymptotics::Side;
use chanskew::gaussian::{
    cap_area_ratio, gaussian_expansion, gaussian_params, random_coding_second_term, shannon_random_coding_logm,
    shannon_sphere_packing_logm, PowerConstraint,
};
use chanskew::numeric::{integrate, noncentral_t_cdf, noncentral_t_pdf};
use chanskew::sweep::SweepSpec;
use common::rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

#[test]
fn constant_gaps() {
    for p in [0.1, 1.0, 10.0, 100.0] {
        let g = gaussian_params(p).unwrap();
        assert!((g.b_upper - g.b_lower - 1.0 - g.capacity).abs() < 1e-14);
        assert!((g.b_upper_eq - g.b_lower_eq - 1.0).abs() < 1e-14);
        assert!(g.capacity > 0.0 && g.dispersion > 0.0);
    }
}

#[test]
fn skewness_closed_form() {
    for p in [1e-3, 0.1, 1.0, 10.0, 100.0] {
        let s = gaussian_params(p).unwrap().skewness;
        let ratio = s * 6.0 * (1.0 + p) * (1.0 + p) * (2.0 + p) / (6.0 + 6.0 * p + 4.0 * p * p + p * p * p);
        assert!(s > 0.0 && (ratio - 1.0).abs() < 1e-14);
    }
    assert!((gaussian_params(1e-9).unwrap().skewness - 0.5).abs() < 1e-8);
}

#[test]
fn cap_halves_add_to_one() {
    for n in [3, 10, 400, 501] {
        for b in [0.0, 0.05, 0.3, 0.77, 0.99] {
            let up = cap_area_ratio(n, b).unwrap().exact.prob();
            let dn = cap_area_ratio(n, -b).unwrap().exact.prob();
            assert!((up + dn - 1.0).abs() < 1e-12, "n {n} b {b}");
        }
    }
}

#[test]
fn achievability_below_converse_on_figure_grid() {
    let eps = SweepSpec::log_spaced(1e-5, 1e-3, 10).unwrap();
    for &e in &eps {
        let ach = shannon_random_coding_logm(400, 10.0, e).unwrap().log_m;
        for c in [PowerConstraint::Equal, PowerConstraint::Maximal] {
            let conv = shannon_sphere_packing_logm(400, 10.0, e, c).unwrap().log_m;
            assert!(ach <= conv, "eps {e}: {ach} > {conv}");
        }
    }
}

#[test]
fn expansions_against_bracket() {
    // Lower expansions fall inside [random coding, sphere packing]. Upper
    // expansions overshoot their own converse by a bounded amount.
    for e in SweepSpec::log_spaced(1e-5, 1e-3, 9).unwrap() {
        let ach = shannon_random_coding_logm(400, 10.0, e).unwrap().log_m;
        for c in [PowerConstraint::Maximal, PowerConstraint::Equal] {
            let conv = shannon_sphere_packing_logm(400, 10.0, e, c).unwrap().log_m;
            let lo = gaussian_expansion(10.0, 400, e, Side::Lower, c).unwrap().total_log_m;
            let hi = gaussian_expansion(10.0, 400, e, Side::Upper, c).unwrap().total_log_m;
            let inside = ach <= lo && lo <= conv;
            if e >= 1e-4 * (1.0 - 1e-12) {
                assert!(inside, "eps {e} {c:?}: {lo} not in [{ach}, {conv}]");
            } else if !inside {
                eprintln!("eps {e:.3e} {c:?}: {lo:.4} outside [{ach:.4}, {conv:.4}]");
            }
            assert!(hi > ach && hi - conv < 0.5, "eps {e} {c:?}: upper {hi} vs converse {conv}");
        }
    }
}

#[test]
fn random_coding_monotone_in_eps() {
    let eps = SweepSpec::log_spaced(1e-5, 1e-1, 20).unwrap();
    let v: Vec<f64> = eps.iter().map(|&e| shannon_random_coding_logm(400, 10.0, e).unwrap().log_m).collect();
    assert!(v.windows(2).all(|w| w[1] > w[0]), "{v:?}");
}

#[test]
fn noncentral_t_against_sampling() {
    // 4e5 draws; the binomial standard error is at most 8e-4.
    let (df, nc, draws) = (30u64, 3.0f64, 400_000usize);
    let chi = ChiSquared::new(df as f64).unwrap();
    let mut r = rng(123);
    let samples: Vec<f64> = (0..draws)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut r);
            (z + nc) / (chi.sample(&mut r) / df as f64).sqrt()
        })
        .collect();
    for t in [1.0, 2.5, 3.0, 4.0, 6.0] {
        let emp = samples.iter().filter(|&&s| s <= t).count() as f64 / draws as f64;
        let exact = noncentral_t_cdf(t, df, nc).unwrap();
        let se = (exact * (1.0 - exact) / draws as f64).sqrt();
        assert!((emp - exact).abs() < 5.0 * se + 1e-6, "t {t}: {emp} vs {exact}");
    }
}

#[test]
fn laplace_second_term_against_quadrature() {
    // M ∫_a^1 f(b) Ω(b) db, with f the density of the normalised inner
    // product and Ω the cap fraction at height b.
    let (n, p) = (400u64, 10.0);
    for eps in [1e-5, 1e-4, 1e-3] {
        let ach = shannon_random_coding_logm(n, p, eps).unwrap();
        let nc = (n as f64 * p).sqrt();
        let df = n - 1;
        let dens = |b: f64| {
            let s = 1.0 - b * b;
            let t = (df as f64).sqrt() * b / s.sqrt();
            noncentral_t_pdf(t, df, nc).unwrap() * (df as f64).sqrt() / s.powf(1.5)
        };
        let f = |b: f64| {
            if b >= 1.0 {
                return 0.0;
            }
            (ach.log_m + dens(b).ln() + cap_area_ratio(n, b).unwrap().exact.ln()).exp()
        };
        let exact = integrate(&f, ach.a, 1.0, 1e-10).unwrap();
        let laplace = random_coding_second_term(n, p, ach.a, ach.log_m);
        assert!((laplace / exact - 1.0).abs() < 0.05, "eps {eps}: laplace {laplace} vs quadrature {exact}");
    }
}
