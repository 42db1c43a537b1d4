//! Verification suites over the kernel, operator and zeta identities, with
//! canonical JSON/CSV/text renderings of their outcomes.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pseudo::{bernstein_verify, constants, funceq_verify, FunceqPath, PseudoOp};
use crate::quadform::{epsilon, QuadraticForm};
use crate::riesz::{default_grid, log_point, Exponent, KernelFamily, RieszKernel};
use crate::scalars::{rat, ExtScalar};
use crate::schwartz::{lizorkin0, random_phi, random_psi, shifted_box, unit_ball, Lizorkin, TestFunction};
use crate::zeta::ord_moment;

type Tf = TestFunction<ExtScalar>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Funceq,
    Grouplaw,
    Bernstein,
    Fundamental,
    Delta,
    Logkernel,
    Semigroup,
    Fourier,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Funceq,
        Suite::Grouplaw,
        Suite::Bernstein,
        Suite::Fundamental,
        Suite::Delta,
        Suite::Logkernel,
        Suite::Semigroup,
        Suite::Fourier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Funceq => "funceq",
            Suite::Grouplaw => "grouplaw",
            Suite::Bernstein => "bernstein",
            Suite::Fundamental => "fundamental",
            Suite::Delta => "delta",
            Suite::Logkernel => "logkernel",
            Suite::Semigroup => "semigroup",
            Suite::Fourier => "fourier",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))
    }
}

/// One checked identity: both sides in canonical text form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: String,
    pub prime: u64,
    pub form: String,
    pub witness: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

/// Inputs shared by every suite.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub prime: u64,
    /// Restricts the suites to this form; otherwise every supported family.
    pub form: Option<QuadraticForm>,
    /// Restricts the suites to this witness `(name, φ)`.
    pub phi: Option<(String, Tf)>,
    pub grid: Vec<(i64, i64)>,
    /// Number of seeded random corpus entries added to the builtins.
    pub random: u64,
    pub depth_bound: u32,
}

impl SuiteConfig {
    pub fn new(prime: u64) -> Self {
        SuiteConfig {
            prime,
            form: None,
            phi: None,
            grid: default_grid(),
            random: 2,
            depth_bound: crate::DEFAULT_DEPTH_BOUND,
        }
    }

    fn kernels(&self, binary: bool) -> Result<Vec<RieszKernel>> {
        let p = self.prime;
        let list = match &self.form {
            Some(f) => vec![RieszKernel::new(f)?],
            None => {
                let e = epsilon(p) as i64;
                let mut v = vec![RieszKernel::four_dim(p)?];
                if binary {
                    for eta in [e, p as i64, e * p as i64] {
                        v.push(RieszKernel::binary(p, eta)?);
                    }
                }
                v
            }
        };
        Ok(list.into_iter().map(|k| k.with_depth_bound(self.depth_bound)).collect())
    }

    /// Lizorkin witnesses: `ϕ₀` and seeded random members of `Φ`.
    fn phi_witnesses(&self, n: usize) -> Vec<(String, Tf)> {
        if let Some(w) = &self.phi {
            return vec![w.clone()];
        }
        let p = self.prime;
        let mut v = vec![("lizorkin0".to_string(), lizorkin0(p, n))];
        v.extend((1..=self.random).map(|s| (format!("random_phi#{s}"), random_phi(p, n, s))));
        v
    }

    /// Builtins plus random members of `Φ` and `Ψ`.
    fn general_witnesses(&self, n: usize) -> Vec<(String, Tf)> {
        if let Some(w) = &self.phi {
            return vec![w.clone()];
        }
        let p = self.prime;
        let mut v = vec![
            ("unit_ball".to_string(), unit_ball(p, n)),
            ("lizorkin0".to_string(), lizorkin0(p, n)),
            ("shifted_box".to_string(), shifted_box(p, n)),
        ];
        for s in 1..=self.random {
            v.push((format!("random_phi#{s}"), random_phi(p, n, s)));
            v.push((format!("random_psi#{s}"), random_psi(p, n, s)));
        }
        v
    }

    fn psi_witnesses(&self, n: usize) -> Vec<(String, Tf)> {
        if let Some(w) = &self.phi {
            return vec![w.clone()];
        }
        let p = self.prime;
        let mut v = vec![("fourier[lizorkin0]".to_string(), lizorkin0(p, n).fourier())];
        v.extend((1..=self.random).map(|s| (format!("random_psi#{s}"), random_psi(p, n, s))));
        v
    }
}

fn claim(suite: Suite, case: &str, k: &RieszKernel, witness: &str, lhs: String, rhs: String, equal: bool) -> Claim {
    Claim {
        id: format!("{}:{}", suite.name(), case),
        prime: k.prime(),
        form: k.form().label(),
        witness: witness.to_string(),
        lhs,
        rhs,
        equal,
    }
}

fn funceq(cfg: &SuiteConfig) -> Result<Vec<Claim>> {
    let mut out = Vec::new();
    for k in cfg.kernels(true)? {
        let witnesses = match &cfg.phi {
            Some(w) => vec![w.clone()],
            None => vec![
                ("unit_ball".to_string(), unit_ball(cfg.prime, k.dim())),
                ("shifted_box".to_string(), shifted_box(cfg.prime, k.dim())),
            ],
        };
        for (name, phi) in witnesses {
            let r = funceq_verify(k.form(), &phi, FunceqPath::Both, cfg.depth_bound)?;
            let general = match (&r.rhs_factor, &r.rhs_zeta) {
                (Some(f), Some(z)) => f.checked_mul(z)?.to_string(),
                _ => String::new(),
            };
            let certified = match (&r.certified_factor, &r.certified_zeta) {
                (Some(f), Some(z)) => f.checked_mul(z)?.to_string(),
                _ => String::new(),
            };
            let lhs = r.lhs.to_string();
            out.push(claim(Suite::Funceq, "general", &k, &name, lhs.clone(), general, r.equal == Some(true)));
            out.push(claim(
                Suite::Funceq,
                "certified",
                &k,
                &name,
                lhs,
                certified,
                r.certified_equal == Some(true),
            ));
        }
    }
    Ok(out)
}

/// `K_a ∗ (K_b ∗ φ)` against `K_{a+b} ∗ φ`; `sign = −1` gives the operator
/// semigroup `f(∂,a) f(∂,b) = f(∂,a+b)`.
fn composition(cfg: &SuiteConfig, suite: Suite, sign: i64) -> Result<Vec<Claim>> {
    let mut out = Vec::new();
    for k in cfg.kernels(false)?.into_iter().chain(binary_eps(cfg)?) {
        for (name, phi) in cfg.phi_witnesses(k.dim()) {
            if !phi.lizorkin_check(Lizorkin::Phi) {
                return Err(Error::NotInPhi);
            }
            let cases: Vec<Claim> = cfg
                .grid
                .par_iter()
                .map(|&(a, b)| -> Result<Claim> {
                    let inner = k.convolve_numeric(&phi, sign * b)?;
                    let lhs = k.convolve_numeric(&inner, sign * a)?;
                    let rhs = k.convolve_numeric(&phi, sign * (a + b))?;
                    let equal = lhs == rhs;
                    Ok(claim(suite, &format!("({a},{b})"), &k, &name, lhs.to_string(), rhs.to_string(), equal))
                })
                .collect::<Result<_>>()?;
            out.extend(cases);
        }
    }
    Ok(out)
}

/// The binary form `x² − εy²` when no explicit form was requested.
fn binary_eps(cfg: &SuiteConfig) -> Result<Vec<RieszKernel>> {
    if cfg.form.is_some() {
        return Ok(vec![]);
    }
    Ok(vec![
        RieszKernel::binary(cfg.prime, epsilon(cfg.prime) as i64)?.with_depth_bound(cfg.depth_bound)
    ])
}

fn four_dim_only(cfg: &SuiteConfig) -> Result<Vec<RieszKernel>> {
    let ks = cfg.kernels(false)?;
    if ks.iter().any(|k| k.family() != KernelFamily::FourDim) {
        return Err(Error::Unsupported("identity is stated for the four-variable form".into()));
    }
    Ok(ks)
}

fn bernstein(cfg: &SuiteConfig) -> Result<Vec<Claim>> {
    let mut out = Vec::new();
    for k in four_dim_only(cfg)? {
        for (name, phi) in cfg.phi_witnesses(4) {
            let r = bernstein_verify(&k, &phi)?;
            let holds = r.equal && r.spot_check && r.kernel_identity;
            out.push(claim(Suite::Bernstein, "identity", &k, &name, r.lhs.to_string(), r.rhs.to_string(), holds));
        }
    }
    Ok(out)
}

fn fundamental(cfg: &SuiteConfig) -> Result<Vec<Claim>> {
    let mut out = Vec::new();
    for k in cfg.kernels(false)?.into_iter().chain(binary_eps(cfg)?) {
        for (name, phi) in cfg.phi_witnesses(k.dim()) {
            for alpha in 1..=3 {
                let op = PseudoOp::new(k.clone(), Exponent::Numeric(alpha));
                let sol = op.fundamental_solve(&phi)?;
                let lhs = k.convolve_numeric(&constants(&sol.u)?, -alpha)?;
                let holds = sol.round_trip && sol.multiplier_identity && sol.in_phi && sol.log_kernel_agrees != Some(false);
                out.push(claim(
                    Suite::Fundamental,
                    &format!("alpha={alpha}"),
                    &k,
                    &name,
                    lhs.to_string(),
                    phi.to_string(),
                    holds,
                ));
            }
        }
    }
    Ok(out)
}

fn delta(cfg: &SuiteConfig) -> Result<Vec<Claim>> {
    let mut out = Vec::new();
    for k in cfg.kernels(true)? {
        for (name, phi) in cfg.general_witnesses(k.dim()) {
            let lhs = k.delta_limit(&phi)?;
            let rhs = phi.value_at_origin();
            let equal = lhs == rhs;
            out.push(claim(Suite::Delta, "limit", &k, &name, lhs.to_string(), rhs.to_string(), equal));
        }
    }
    Ok(out)
}

fn logkernel(cfg: &SuiteConfig) -> Result<Vec<Claim>> {
    let mut out = Vec::new();
    for k in four_dim_only(cfg)? {
        let p = k.prime();
        let unit = ord_moment(k.form(), &unit_ball(p, 4), cfg.depth_bound)?;
        let expect = ExtScalar::from_rational(p, rat(1, (p * p) as i64 - 1));
        let equal = unit == expect;
        out.push(claim(
            Suite::Logkernel,
            "ord_moment",
            &k,
            "unit_ball",
            unit.to_string(),
            expect.to_string(),
            equal,
        ));
        for (name, phi) in cfg.phi_witnesses(4) {
            let lhs = k.pair(&phi)?.value_after_cancellation(&log_point(p))?;
            let rhs = k.log_pair(&phi)?;
            let equal = lhs == rhs;
            out.push(claim(Suite::Logkernel, "limit", &k, &name, lhs.to_string(), rhs.to_string(), equal));
        }
    }
    Ok(out)
}

fn fourier(cfg: &SuiteConfig) -> Result<Vec<Claim>> {
    let mut out = Vec::new();
    for k in cfg.kernels(true)? {
        for (name, psi) in cfg.psi_witnesses(k.dim()) {
            let (pos, neg) = k.fourier_check(&psi)?;
            let show = |b: bool| if b { "holds" } else { "fails" }.to_string();
            out.push(claim(Suite::Fourier, "positive", &k, &name, show(pos), show(true), pos));
            out.push(claim(Suite::Fourier, "negative", &k, &name, show(neg), show(true), neg));
        }
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Claim>> {
    crate::quadform::check_odd_prime(cfg.prime)?;
    match suite {
        Suite::Funceq => funceq(cfg),
        Suite::Grouplaw => composition(cfg, Suite::Grouplaw, 1),
        Suite::Bernstein => bernstein(cfg),
        Suite::Fundamental => fundamental(cfg),
        Suite::Delta => delta(cfg),
        Suite::Logkernel => logkernel(cfg),
        Suite::Semigroup => composition(cfg, Suite::Semigroup, -1),
        Suite::Fourier => fourier(cfg),
    }
}

/// Every suite in [`Suite::ALL`] order. With an explicit form, suites that
/// do not apply to it are skipped.
pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<Claim>> {
    let mut out = Vec::new();
    for suite in Suite::ALL {
        match run_suite(suite, cfg) {
            Ok(c) => out.extend(c),
            Err(Error::Unsupported(_)) if cfg.form.is_some() => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

pub fn passed(claims: &[Claim]) -> bool {
    claims.iter().all(|c| c.equal)
}

pub fn render(claims: &[Claim], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(claims).expect("claims serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for c in claims {
                w.serialize(c).expect("claims serialize");
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
        }
        Format::Text => {
            let mut s = String::new();
            for c in claims {
                let mark = if c.equal { "PASS" } else { "FAIL" };
                s.push_str(&format!("{mark} {} p={} form=[{}] phi={}\n", c.id, c.prime, c.form, c.witness));
                if !c.equal {
                    s.push_str(&format!("  lhs: {}\n  rhs: {}\n", c.lhs, c.rhs));
                }
            }
            let bad = claims.iter().filter(|c| !c.equal).count();
            s.push_str(&format!("{} claims, {} failed\n", claims.len(), bad));
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_suite_passes_and_is_stable() {
        let mut cfg = SuiteConfig::new(3);
        cfg.random = 1;
        let a = run_suite(Suite::Delta, &cfg).unwrap();
        assert!(passed(&a));
        assert_eq!(a.len(), 4 * 5);
        let b = run_suite(Suite::Delta, &cfg).unwrap();
        assert_eq!(render(&a, Format::Json), render(&b, Format::Json));
        assert!(render(&a, Format::Csv).starts_with("id,prime,form,witness,lhs,rhs,equal\n"));
    }

    #[test]
    fn explicit_form_skips_inapplicable() {
        let mut cfg = SuiteConfig::new(5);
        cfg.form = Some(QuadraticForm::binary(5, 2).unwrap());
        cfg.random = 0;
        assert!(matches!(run_suite(Suite::Bernstein, &cfg), Err(Error::Unsupported(_))));
        let claims = run_suite(Suite::Logkernel, &cfg);
        assert!(claims.is_err());
        cfg.grid = vec![(1, 1)];
        assert!(passed(&run_suite(Suite::Grouplaw, &cfg).unwrap()));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
        }
        assert!(Suite::parse("nope").is_err());
    }
}
