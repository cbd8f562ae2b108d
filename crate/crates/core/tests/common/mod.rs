//! Shared fixtures, frozen reference data, random program generation, and a
//! brute-force grid oracle for the integration suites.

use mogp::io::parse_problem;
use mogp::model::{Monomial, MultiObjectiveProgram, Posynomial, VariableSpace};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load_fixture(name: &str) -> MultiObjectiveProgram {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse_problem(&text).expect("fixture parses")
}

/// Four-variable reference: `(w1, duals, V)` per weighting. Dual order is
/// five objective terms, two first-constraint terms, one second-constraint
/// term.
pub const TABLE1: [(f64, [f64; 8], f64); 5] = [
    (0.1, [0.2308894, 0.3045667, 0.3329927, 0.1305293, 0.0010217, 0.051051, 0.014213, 0.3319702], 8.80776),
    (0.2, [0.2310206, 0.3044397, 0.3331819, 0.1306035, 0.0004543, 0.051080, 0.014221, 0.3319701], 17.60555),
    (0.3, [0.2310643, 0.3047974, 0.3332450, 0.1306282, 0.000265092, 0.05109, 0.0142237, 0.3329799], 26.40333),
    (0.4, [0.2310862, 0.3048263, 0.3332765, 0.1306406, 0.000170424, 0.051095, 0.014225, 0.3331061], 35.20111),
    (0.5, [0.2310993, 0.3048436, 0.3332955, 0.1306480, 0.000113614, 0.051098, 0.0142259, 0.3331818], 43.99888),
];

/// Four-variable reference minimizer, shared by every weighting.
pub const TABLE2_X: [f64; 4] = [5.084055, 2.682555, 7.332315, 5.748367];

/// Three-variable reference (corrected form): `(w1, duals, V)`. Dual order
/// is three objective terms, two first-constraint terms, one
/// second-constraint term.
pub const TABLE3: [(f64, [f64; 6], f64); 5] = [
    (0.1, [0.2085711, 0.5276192, 0.2638096, 1.00, 1.055235, 0.0], 0.1642316),
    (0.2, [0.3640122, 0.4239919, 0.2119959, 0.9239919, 0.9239918, 0.076008], 0.1831441),
    (0.3, [0.4952513, 0.3364992, 0.1682496, 0.8364992, 0.8364992, 0.1635008], 0.2019177),
    (0.4, [0.604162, 0.2638920, 0.1319460, 0.7638920, 0.7638920, 0.2361080], 0.2206914),
    (0.5, [0.6959958, 0.2026694, 0.1013347, 0.7026695, 0.7026694, 0.2973305], 0.2394650),
];

/// Three-variable reference minimizers per weighting.
pub const TABLE4_X: [(f64, [f64; 3]); 5] = [
    (0.1, [2.527860, 8.217575, 0.3748833]),
    (0.2, [2.620746, 7.862237, 0.3815708]),
    (0.3, [2.620745, 7.862236, 0.3815709]),
    (0.4, [2.620747, 7.862240, 0.3815707]),
    (0.5, [2.620747, 7.862242, 0.3815705]),
];

/// Frozen optimum of the uncorrected three-variable variant at w=(0.2, 0.8),
/// computed independently and checked to fourteen digits.
pub const VERBATIM_W02_VALUE: f64 = 0.13906869015295373;

/// Ideal values of the corrected three-variable program.
pub const EX2_IDEAL1_VALUE: f64 = 1.0 / 3.0;
pub const EX2_IDEAL2_VALUE: f64 = 0.1421595;
pub const EX2_IDEAL2_X: [f64; 3] = [2.148558, 9.82199, 0.3490711];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random standardized program: `objectives` split a term budget of at most
/// `n + dod_cap + 1` total terms across objectives and up to two
/// constraints, exponents in [-3, 3], coefficients in [0.1, 10], and every
/// constraint scaled to be strictly feasible at a random anchor point.
pub fn random_program(
    rng: &mut ChaCha8Rng,
    max_vars: usize,
    dod_cap: usize,
    objectives: usize,
) -> MultiObjectiveProgram {
    let n = rng.gen_range(1..=max_vars);
    let budget = n + dod_cap + 1;
    let names: Vec<String> = (0..n).map(|j| format!("x{}", j + 1)).collect();
    let vars = VariableSpace::new(names).unwrap();

    let mono = |rng: &mut ChaCha8Rng| {
        let coef = rng.gen_range(0.1..10.0);
        let exps: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        Monomial::new(coef, exps).unwrap()
    };

    let mut total = 0usize;
    let mut objs = Vec::with_capacity(objectives);
    for k in 0..objectives {
        let remaining_objs = objectives - k - 1;
        let cap = budget - total - remaining_objs;
        let t = rng.gen_range(1..=3usize.min(cap.max(1)));
        objs.push(Posynomial::new((0..t).map(|_| mono(rng)).collect()).unwrap());
        total += t;
    }

    let xbar: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let mut cons = Vec::new();
    let m = rng.gen_range(0..=2usize);
    for _ in 0..m {
        let t = rng.gen_range(1..=2usize);
        if total + t > budget {
            break;
        }
        total += t;
        let terms: Vec<Monomial> = (0..t).map(|_| mono(rng)).collect();
        let posy = Posynomial::new(terms).unwrap();
        let val = posy.eval(&xbar).unwrap();
        let scale = rng.gen_range(0.3..0.95) / val;
        cons.push(posy.scaled(scale).unwrap());
    }

    MultiObjectiveProgram::new(vars, objs, cons).unwrap()
}

/// Brute-force scalarized minimum over a log-space grid of `[1e-3, 1e3]^n`,
/// refined three times around the incumbent. Returns `None` when no grid
/// point is feasible.
pub fn grid_oracle(prog: &MultiObjectiveProgram, weights: &[f64]) -> Option<f64> {
    let n = prog.num_variables();
    let terms: Vec<(f64, Vec<f64>, f64, usize)> = {
        // (ln coef, exponents, weight multiplier, kind) with kind 0 for
        // objective terms and i >= 1 for constraint i terms.
        let mut out = Vec::new();
        for (k, obj) in prog.objectives().iter().enumerate() {
            for t in obj.terms() {
                out.push((t.coefficient().ln(), t.exponents().to_vec(), weights[k], 0));
            }
        }
        for (i, g) in prog.constraints().iter().enumerate() {
            for t in g.terms() {
                out.push((t.coefficient().ln(), t.exponents().to_vec(), 1.0, i + 1));
            }
        }
        out
    };
    let m = prog.num_constraints();

    let eval = |lx: &[f64]| -> Option<f64> {
        let mut z = 0.0;
        let mut g = vec![0.0f64; m];
        for (lc, exps, w, kind) in &terms {
            let ln_term = lc + exps.iter().zip(lx).map(|(a, l)| a * l).sum::<f64>();
            let v = ln_term.exp();
            if *kind == 0 {
                z += w * v;
            } else {
                g[kind - 1] += v;
            }
        }
        if g.iter().all(|&gi| gi <= 1.0 + 1e-9) {
            Some(z)
        } else {
            None
        }
    };

    let ln10 = std::f64::consts::LN_10;

    let scan = |center: &[f64], half_span: f64, points: usize| -> Vec<(f64, Vec<f64>)> {
        let step = 2.0 * half_span / (points - 1) as f64;
        let mut found = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            let lx: Vec<f64> = (0..n)
                .map(|j| center[j] - half_span + idx[j] as f64 * step)
                .collect();
            if let Some(z) = eval(&lx) {
                found.push((z, lx));
            }
            let mut j = 0;
            loop {
                if j == n {
                    break;
                }
                idx[j] += 1;
                if idx[j] < points {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == n {
                break;
            }
        }
        found
    };

    // Coarse scan of the whole box, then independent refinement around
    // several well-separated leaders. Thin feasible slivers alias badly on a
    // coarse grid, so a single-incumbent refinement can stall several steps
    // from the constrained optimum; multiple starts cover the sliver.
    let coarse_points = 101usize;
    let coarse_half = 3.0 * ln10;
    let coarse_step = 2.0 * coarse_half / (coarse_points - 1) as f64;
    let mut feasible = scan(&vec![0.0; n], coarse_half, coarse_points);
    if feasible.is_empty() {
        return None;
    }
    feasible.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut seeds: Vec<(f64, Vec<f64>)> = Vec::new();
    for (z, lx) in feasible {
        let separated = seeds.iter().all(|(_, s)| {
            s.iter().zip(&lx).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
                >= 1.5 * coarse_step
        });
        if separated {
            seeds.push((z, lx));
            if seeds.len() == 12 {
                break;
            }
        }
    }

    // Refinement windows stay wide (8 grid steps) and shrink only on
    // improvement. When two constraints meet at the optimum the nearest
    // feasible grid point lies several steps from the corner, so a tight
    // window centered there would exclude the corner and stall.
    let mut best = f64::INFINITY;
    for (seed_z, seed_lx) in seeds {
        let mut local = (seed_z, seed_lx);
        let mut half_span = 8.0 * coarse_step;
        for _ in 0..12 {
            let step = 2.0 * half_span / 40.0;
            let mut improved = false;
            for cand in scan(&local.1, half_span, 41) {
                if cand.0 < local.0 {
                    local = cand;
                    improved = true;
                }
            }
            half_span = if improved {
                8.0 * step
            } else {
                (2.5 * half_span).min(3.0 * ln10)
            };
        }
        best = best.min(local.0);
    }
    Some(best)
}
