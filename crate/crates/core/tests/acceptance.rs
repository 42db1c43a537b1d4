//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout:
//! `cargo test -p padic-riesz --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_riesz::pseudo::{bernstein_factor, bernstein_verify, certified_factor, funceq_verify, FunceqPath, PseudoOp};
use padic_riesz::quadform::{
    epsilon, hilbert, hilbert_class, hilbert_oracle, rho_factor, rho_sign, rho_sign_oracle, weil_gamma, weil_gamma_form,
};
use padic_riesz::riesz::{default_grid, log_point, Exponent, RieszKernel};
use padic_riesz::scalars::{p_power, rat};
use padic_riesz::schwartz::{builtin, lizorkin0, random_phi, random_psi, BUILTINS};
use padic_riesz::zeta::{ord_moment, tail_integral, unit_sphere_integral, zeta, zeta_oracle_float, ZetaRequest};
use padic_riesz::{Ball, ExtScalar, QuadraticForm, Rational, RationalFunctionT, Result, SquareClass, TestFunction};

type Tf = TestFunction<ExtScalar>;

const DEPTH: u32 = padic_riesz::DEFAULT_DEPTH_BOUND;

fn q(p: u64, x: Rational) -> ExtScalar {
    ExtScalar::from_rational(p, x)
}

fn one(p: u64) -> ExtScalar {
    ExtScalar::one(p)
}

/// `Σ c_k t^k / Σ d_k t^k` with rational coefficients.
fn ratfun(p: u64, num: &[(i64, Rational)], den: &[(i64, Rational)]) -> RationalFunctionT {
    let lift = |v: &[(i64, Rational)]| v.iter().map(|(k, c)| (*k, q(p, c.clone()))).collect::<Vec<_>>();
    RationalFunctionT::from_parts(p, &lift(num), &lift(den)).unwrap()
}

fn r(n: i64) -> Rational {
    rat(n, 1)
}

fn four_dim(p: u64) -> QuadraticForm {
    QuadraticForm::four_dim(p, epsilon(p) as i64).unwrap()
}

fn binary_etas(p: u64) -> [i64; 3] {
    let e = epsilon(p) as i64;
    [e, p as i64, e * p as i64]
}

fn phi_corpus(p: u64, n: usize, randoms: u64) -> Vec<(String, Tf)> {
    let mut out = vec![("lizorkin0".to_string(), lizorkin0(p, n))];
    out.extend((1..=randoms).map(|s| (format!("random_phi#{s}"), random_phi(p, n, s))));
    out
}

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            ok: true,
            detail: String::new(),
        }
    }

    fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            if self.ok {
                self.detail = what();
            }
            self.ok = false;
        }
    }
}

fn zeta_closed_form() -> Result<Outcome> {
    let mut out = Outcome::new();
    for p in [3, 5, 7] {
        let f = four_dim(p);
        for m in 0..=3 {
            let phi = Tf::indicator(&Ball::centered(p, 4, -m), one(p));
            let value = zeta(&ZetaRequest::new(&f, &phi))?.value;
            let c = r(1) - p_power(p, -2);
            let expected = ratfun(p, &[(2 * m, c)], &[(0, r(1)), (1, r(-1))]);
            out.check(value == expected, || format!("p={p} m={m}: {value}"));
        }
    }
    Ok(out)
}

/// Table entries for `f = x1² − εx2² − px3² + εpx4²`, `true` meaning `pZ_p`.
fn unit_box_entry(p: u64, pattern: &[bool]) -> RationalFunctionT {
    let u = r(1) - p_power(p, -1);
    let ones = pattern.iter().filter(|&&b| b).count();
    let (c, k) = match (pattern, ones) {
        ([true, true, _, _], 3) => (p_power(p, -1) * &u, 1),
        ([true, true, false, false], 2) => (&u * &u, 1),
        (_, 3) => (&u * p_power(p, -3), 0),
        (_, 2) => (&u * &u * p_power(p, -2), 0),
        (_, 1) => (&u * &u * &u * p_power(p, -1), 0),
        _ => (&u * &u * &u * &u, 0),
    };
    ratfun(p, &[(k, c)], &[(0, r(1))])
}

fn unit_box_table() -> Result<Outcome> {
    let mut out = Outcome::new();
    for p in [3, 5, 7] {
        let sphere = unit_sphere_integral(&four_dim(p))?;
        out.check(sphere.rows.len() == 15, || format!("p={p}: {} rows", sphere.rows.len()));
        for (pattern, value) in &sphere.rows {
            let expected = unit_box_entry(p, pattern);
            out.check(*value == expected, || format!("p={p} {pattern:?}: {value}"));
        }
        let total = ratfun(p, &[(0, r(1) - p_power(p, -2)), (1, r(1) - p_power(p, -2))], &[(0, r(1))]);
        out.check(sphere.total == total, || format!("p={p} total: {}", sphere.total));
    }
    Ok(out)
}

fn tail() -> Result<Outcome> {
    let mut out = Outcome::new();
    for p in [3, 5, 7] {
        let value = tail_integral(&four_dim(p))?;
        // t²(1−p^{−2})(1+t^{−1})/(1−t²) = (1−p^{−2})(t + t²)/(1−t²)
        let c = r(1) - p_power(p, -2);
        let expected = ratfun(p, &[(1, c.clone()), (2, c)], &[(0, r(1)), (2, r(-1))]);
        out.check(value == expected, || format!("p={p}: {value}"));
    }
    Ok(out)
}

fn all_kernels(p: u64) -> Result<Vec<RieszKernel>> {
    let mut ks = vec![RieszKernel::four_dim(p)?];
    for eta in binary_etas(p) {
        ks.push(RieszKernel::binary(p, eta)?);
    }
    Ok(ks)
}

fn delta_limit() -> Result<Outcome> {
    let mut out = Outcome::new();
    for p in [3, 5] {
        for k in all_kernels(p)? {
            let n = k.dim();
            let mut corpus: Vec<Tf> = BUILTINS.iter().map(|b| builtin(b, p, n)).collect::<Result<_>>()?;
            corpus.extend((1..=10).map(|s| random_phi(p, n, s)));
            corpus.extend((1..=10).map(|s| random_psi(p, n, s)));
            for (i, phi) in corpus.iter().enumerate() {
                let lim = k.delta_limit(phi)?;
                out.check(lim == phi.value_at_origin(), || format!("p={p} {} #{i}", k.form().label()));
            }
        }
    }
    Ok(out)
}

fn log_kernel() -> Result<Outcome> {
    let mut out = Outcome::new();
    for p in [3, 5] {
        let k = RieszKernel::four_dim(p)?;
        let moment = ord_moment(k.form(), &builtin("unit_ball", p, 4)?, DEPTH)?;
        out.check(moment == q(p, rat(1, (p * p - 1) as i64)), || format!("p={p}: moment {moment}"));
        let scale = q(p, r(1) - p_power(p, -2));
        for s in 1..=10 {
            let phi = random_phi(p, 4, s);
            let limit = k.pair(&phi)?.value_after_cancellation(&log_point(p))?;
            let expected = &scale * &ord_moment(k.form(), &phi, DEPTH)?;
            out.check(limit == expected, || format!("p={p} seed {s}"));
            out.check(k.log_pair(&phi)? == expected, || format!("p={p} seed {s}: log_pair"));
        }
    }
    Ok(out)
}

fn fourier_relation() -> Result<Outcome> {
    let mut out = Outcome::new();
    for p in [3, 5] {
        for k in all_kernels(p)? {
            for s in 1..=10 {
                let psi = random_psi(p, k.dim(), s);
                let (pos, neg) = k.fourier_check(&psi)?;
                out.check(pos && neg, || format!("p={p} {} seed {s}: ({pos}, {neg})", k.form().label()));
            }
        }
    }
    Ok(out)
}

fn group_law() -> Result<Outcome> {
    let mut out = Outcome::new();
    let grid = default_grid();
    for p in [3, 5] {
        let kernels = [RieszKernel::four_dim(p)?, RieszKernel::binary(p, epsilon(p) as i64)?];
        for k in &kernels {
            for (name, phi) in phi_corpus(p, k.dim(), 5) {
                for case in k.group_law(&phi, &grid)? {
                    out.check(case.holds, || {
                        format!("p={p} {} {name} ({}, {})", k.form().label(), case.a, case.b)
                    });
                }
            }
        }
    }
    Ok(out)
}

fn funceq() -> Result<Outcome> {
    let mut out = Outcome::new();
    for p in [3, 5] {
        let e = epsilon(p) as i64;
        // (form, closed-form factor in t = p^{−s})
        let cases = [
            (four_dim(p), ratfun(p, &[(0, r(1)), (-1, -p_power(p, -2))], &[(0, r(1)), (1, r(-1))])),
            (
                QuadraticForm::binary(p, e)?,
                ratfun(p, &[(0, r(1)), (-2, -p_power(p, -2))], &[(0, r(1)), (2, r(-1))]),
            ),
            (
                QuadraticForm::binary(p, p as i64)?,
                ratfun(p, &[(0, r(1)), (-1, -p_power(p, -1))], &[(0, r(1)), (1, r(-1))]),
            ),
            (
                QuadraticForm::binary(p, e * p as i64)?,
                ratfun(p, &[(0, r(1)), (-1, -p_power(p, -1))], &[(0, r(1)), (1, r(-1))]),
            ),
        ];
        for (form, closed) in &cases {
            let label = form.label();
            let factor = certified_factor(&RieszKernel::new(form)?);
            out.check(factor == *closed, || format!("p={p} {label}: factor {factor}"));
            for name in ["unit_ball", "shifted_box"] {
                let phi = builtin(name, p, form.dim())?;
                let rep = funceq_verify(form, &phi, FunceqPath::Both, DEPTH)?;
                out.check(rep.equal == Some(true), || format!("p={p} {label} {name}: general path"));
                out.check(rep.certified_equal == Some(true), || {
                    format!("p={p} {label} {name}: certified path")
                });
                let certified = closed.checked_mul(rep.certified_zeta.as_ref().unwrap())?;
                out.check(rep.lhs == certified, || format!("p={p} {label} {name}: lhs"));
            }
        }
    }
    Ok(out)
}

fn fundamental() -> Result<Outcome> {
    let mut out = Outcome::new();
    for p in [3, 5] {
        let k = RieszKernel::four_dim(p)?;
        for alpha in 1..=3 {
            let op = PseudoOp::new(k.clone(), Exponent::Numeric(alpha));
            for (name, phi) in phi_corpus(p, 4, 5) {
                let sol = op.fundamental_solve(&phi)?;
                let ok = sol.in_phi && sol.round_trip && sol.multiplier_identity && sol.log_kernel_agrees != Some(false);
                out.check(ok, || format!("p={p} alpha={alpha} {name}"));
                if alpha == 2 {
                    out.check(sol.log_kernel_agrees == Some(true), || format!("p={p} {name}: log kernel"));
                }
            }
        }
    }
    Ok(out)
}

fn bernstein() -> Result<Outcome> {
    let mut out = Outcome::new();
    for p in [3, 5] {
        // (1 − p t^{−1})(1 − p^{−2} t) / ((1 − p^{−3} t)(1 − t^{−1}))
        let num = [(-1, -r(p as i64)), (0, r(1) + p_power(p, -1)), (1, -p_power(p, -2))];
        let den = [(-1, r(-1)), (0, r(1) + p_power(p, -3)), (1, -p_power(p, -3))];
        let a = ratfun(p, &num, &den);
        out.check(bernstein_factor(p) == a, || format!("p={p}: A(s) = {}", bernstein_factor(p)));
        let k = RieszKernel::four_dim(p)?;
        for (name, phi) in phi_corpus(p, 4, 3) {
            let rep = bernstein_verify(&k, &phi)?;
            out.check(rep.equal && rep.spot_check && rep.kernel_identity, || format!("p={p} {name}"));
        }
    }
    Ok(out)
}

fn symbols() -> Result<Outcome> {
    let mut out = Outcome::new();
    for p in [3, 5, 7] {
        let rep = |c: SquareClass| c.representative(p);
        for a in SquareClass::ALL {
            for b in SquareClass::ALL {
                let table = hilbert_class(a, b, p);
                let oracle = hilbert_oracle(&rep(a), &rep(b), p, 6)?;
                out.check(oracle == Some(table), || format!("p={p} ({a},{b}): {table} vs {oracle:?}"));
                out.check(hilbert(&rep(a), &rep(b), p)? == table, || format!("p={p} ({a},{b}): rational path"));
            }
        }

        let gamma = |x: Rational| weil_gamma(&x, p);
        let classes: Vec<Rational> = SquareClass::ALL.iter().map(|c| rep(*c)).collect();
        for a in &classes {
            out.check((&gamma(-a.clone())? * &gamma(a.clone())?).is_one(), || format!("p={p} (i) a={a}"));
        }
        for a in &classes {
            for b in &classes {
                let h = QuadraticForm::new(p, vec![r(1), -a.clone(), -b.clone(), a * b])?;
                let product = &(&gamma(r(1))? * &gamma(-a.clone())?) * &(&gamma(-b.clone())? * &gamma(a * b)?);
                let symbol = ExtScalar::from_integer(p, hilbert(a, b, p)?.into());
                out.check(weil_gamma_form(&h)? == product, || format!("p={p} (ii) a={a} b={b}: product"));
                out.check(product == symbol, || format!("p={p} (ii) a={a} b={b}: symbol"));
            }
        }
        let mut even_forms: Vec<QuadraticForm> = Vec::new();
        for a in &classes {
            for b in &classes {
                even_forms.push(QuadraticForm::new(p, vec![a.clone(), b.clone()])?);
            }
        }
        even_forms.push(four_dim(p));
        for f in &even_forms {
            let d_star = f.d_star().expect("even dimension");
            for t in &classes {
                let lhs = weil_gamma_form(&f.scaled(t)?)?;
                let sign = ExtScalar::from_integer(p, hilbert(t, &d_star, p)?.into());
                let rhs = &weil_gamma_form(f)? * &sign;
                out.check(lhs == rhs, || format!("p={p} (iii) f={} t={t}", f.label()));
            }
        }

        let unramified = [
            (SquareClass::One, ratfun(p, &[(0, r(1)), (-1, -p_power(p, -1))], &[(0, r(1)), (1, r(-1))])),
            (SquareClass::Eps, ratfun(p, &[(0, r(1)), (-1, p_power(p, -1))], &[(0, r(1)), (1, r(1))])),
        ];
        for (class, expected) in unramified {
            out.check(rho_factor(class, p)? == expected, || format!("p={p} rho({class})"));
        }
        for class in [SquareClass::P, SquareClass::EpsP] {
            let sign = rho_sign(class, p)?;
            for depth in 6..=8 {
                let seen = rho_sign_oracle(class, p, depth)?;
                out.check(seen == sign, || format!("p={p} rho sign {class} depth {depth}: {seen} vs {sign}"));
            }
        }
    }
    Ok(out)
}

fn oracle_concordance() -> Result<Outcome> {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for p in [3, 5] {
        let f = four_dim(p);
        let mut corpus: Vec<(String, Tf)> = BUILTINS
            .iter()
            .map(|b| Ok((b.to_string(), builtin(b, p, 4)?)))
            .collect::<Result<_>>()?;
        corpus.extend((1..=2).map(|s| (format!("random_phi#{s}"), random_phi(p, 4, s))));
        corpus.extend((1..=2).map(|s| (format!("random_psi#{s}"), random_psi(p, 4, s))));
        for (name, phi) in &corpus {
            let req = ZetaRequest::new(&f, phi);
            let exact = zeta(&req)?.value;
            for _ in 0..5 {
                let s: f64 = rng.gen_range(2.0..5.0);
                let t = Complex64::new((p as f64).powf(-s), 0.0);
                let diff = (exact.eval_complex(t)? - zeta_oracle_float(&req, Complex64::new(s, 0.0), 6)?).norm();
                out.check(diff < 1e-5, || format!("p={p} {name} s={s:.4}: |diff| = {diff:e}"));
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 12] = [
        ("zeta closed form and scaled balls", zeta_closed_form),
        ("unit-box table and sphere total", unit_box_table),
        ("tail integral", tail),
        ("delta limit", delta_limit),
        ("log-kernel consistency", log_kernel),
        ("Fourier relation", fourier_relation),
        ("group law", group_law),
        ("functional equations", funceq),
        ("fundamental solution", fundamental),
        ("Bernstein identity", bernstein),
        ("symbols and constants", symbols),
        ("oracle concordance", oracle_concordance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        if ok {
            println!("PASS {:>2} {name} ({secs:.1}s)", i + 1);
        } else {
            failed += 1;
            println!("FAIL {:>2} {name} ({secs:.1}s): {detail}", i + 1);
        }
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
