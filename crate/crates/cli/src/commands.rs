//! Argument definitions and subcommand dispatch.

use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dqkit_core::check::Check;
use dqkit_core::cohomology::{cohomology_dim, omega_checks, omega_class, tower_obstruction, CohomologyError, LieModule};
use dqkit_core::darboux::{
    check_symplectic, darboux_normalize, darboux_residual, form_to_bivector, DarbouxError, TransportedStar,
};
use dqkit_core::lie::{
    build_a, build_derd, build_g, build_h, build_sp, build_w, build_w0, commu_diagram_check, BasisElement,
    DiagramFault, GradedLieAlgebra, LieError,
};
use dqkit_core::weyl::induced_poisson;
use dqkit_core::{PoissonBivector, SeriesError, TruncationSpec, WeylError};

use crate::expr::{self, EvalError, ParseError};
use crate::report::{Outcome, Params};
use crate::suites::{self, Suite};

pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, Parser)]
#[command(name = "dqkit", version, about = "Exact computations in the formal Weyl algebra and its derivation tower")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Number of coordinate pairs (x_i, y_i).
    #[arg(long, global = true, default_value_t = 1)]
    pub d: usize,
    /// Order in h: work modulo h^(p+1).
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u32,
    /// Weight cutoff (x, y weigh 1, h weighs 2).
    #[arg(long = "N", global = true, default_value_t = 6)]
    pub n: u32,
    /// Seed for every random sweep.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the JSON report to this file (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<String>,
    /// Corrupt the tower before checking it, to see the checks fail.
    #[arg(long, global = true, value_enum, value_name = "KIND")]
    pub inject_fault: Option<Fault>,
}

impl Global {
    pub fn params(&self) -> Params {
        Params { d: self.d, p: self.p, n: self.n, seed: self.seed }
    }

    fn spec(&self) -> TruncationSpec {
        TruncationSpec::new(self.d, self.p, self.n)
    }

    fn fault(&self) -> DiagramFault {
        match self.inject_fault {
            None => DiagramFault::None,
            Some(Fault::StructureConstant) => DiagramFault::StructureConstant,
            Some(Fault::MapEntry) => DiagramFault::MapEntry,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    StructureConstant,
    MapEntry,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Products in the truncated Weyl algebra; `*` in the operands is the star product.
    #[command(subcommand)]
    Weyl(WeylCmd),
    /// Poisson bracket of two functions, for the standard structure or a symplectic form.
    Poisson {
        a: String,
        b: String,
        /// Use the bivector of this symplectic form instead of the standard one.
        #[arg(long)]
        form: Option<String>,
    },
    /// The derivation tower of the Weyl algebra.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Chevalley–Eilenberg cohomology.
    #[command(subcommand)]
    Cohomology(CohomologyCmd),
    /// Formal Darboux charts.
    #[command(subcommand)]
    Darboux(DarbouxCmd),
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeylCmd {
    /// a * b
    Mul { a: String, b: String },
    /// a * b - b * a
    Comm { a: String, b: String },
    /// The antiinvolution: reverses products, fixes x and y, negates h.
    Iota { a: String },
}

#[derive(Debug, Subcommand)]
pub enum TowerCmd {
    /// Exactness, centrality and commutativity of the tower diagram at level p.
    Check,
    /// JSON dump of one of the truncated Lie algebras.
    Dump {
        #[arg(long, value_enum)]
        algebra: AlgebraName,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgebraName {
    /// Functions under the Poisson bracket.
    A,
    /// Hamiltonians: functions modulo constants.
    H,
    /// Quadratic Hamiltonians.
    Sp,
    /// Formal vector fields.
    W,
    /// Vector fields vanishing at the origin.
    W0,
    /// h^-1 D / h^p D under the commutator.
    G,
    /// Derivations of D modulo h^(p+1).
    Derd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModuleName {
    Trivial,
    Adjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassName {
    /// The class of the symplectic form, from 0 -> k -> A -> H -> 0.
    Omega,
    /// The obstruction to lifting (Der D)_p to G_(p+1).
    Tower,
}

#[derive(Debug, Subcommand)]
pub enum CohomologyCmd {
    /// Dimensions of H^k in each cochain weight.
    Dims {
        #[arg(long, value_enum, default_value = "h")]
        algebra: AlgebraName,
        #[arg(long, value_enum, default_value = "trivial")]
        module: ModuleName,
        /// Largest cochain degree.
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Only this cochain weight.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<i32>,
    },
    /// A distinguished extension class and its checks.
    Class {
        #[arg(value_enum)]
        which: ClassName,
    },
}

#[derive(Debug, Subcommand)]
pub enum DarbouxCmd {
    /// A chart phi with phi^*(form) = sum dx_i /\ dy_i, verified by pullback.
    Normalize {
        #[arg(long)]
        form: String,
    },
    /// The Weyl product carried along the normalizing chart of the form.
    Transport {
        #[arg(long)]
        form: String,
        a: String,
        b: String,
        /// Random samples for the product axioms.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
}

/// Bad input: exits with status 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot parse {what}: {source}")]
    Parse { what: String, source: ParseError },
    #[error("cannot evaluate {what}: {source}")]
    Eval { what: String, source: EvalError },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

fn parse(what: &str, src: &str) -> Result<expr::Expr, CliError> {
    expr::parse(src).map_err(|source| CliError::Parse { what: format!("{what} {src:?}"), source })
}

fn eval_err(what: &str, src: &str) -> impl FnOnce(EvalError) -> CliError {
    let what = format!("{what} {src:?}");
    move |source| CliError::Eval { what, source }
}

fn validate(g: &Global, cmd: &Command) -> Result<(), CliError> {
    if g.d == 0 {
        return Err(CliError::Params("--d must be at least 1".into()));
    }
    if g.n < 2 {
        return Err(CliError::Params("--N must be at least 2".into()));
    }
    let takes_fault = matches!(cmd, Command::Tower(TowerCmd::Check) | Command::Verify { suite: Suite::Tower | Suite::All });
    if g.inject_fault.is_some() && !takes_fault {
        return Err(CliError::Params("--inject-fault only applies to `tower check` and `verify tower|all`".into()));
    }
    Ok(())
}

pub fn dispatch(g: &Global, cmd: &Command) -> Result<Outcome, CliError> {
    validate(g, cmd)?;
    match cmd {
        Command::Weyl(w) => weyl(g, w),
        Command::Poisson { a, b, form } => poisson(g, a, b, form.as_deref()),
        Command::Tower(TowerCmd::Check) => {
            let checks = commu_diagram_check(g.d, g.p, g.n, g.fault())?;
            Ok(Outcome::new(json!({ "diagram": format!("level p={}", g.p) })).checks(checks))
        }
        Command::Tower(TowerCmd::Dump { algebra }) => {
            let alg = build_algebra(*algebra, g)?;
            let dims: Vec<String> = alg.dims_by_weight().iter().map(|(w, n)| format!("{w}:{n}")).collect();
            Ok(Outcome::new(alg.to_json())
                .line(format!("{} (dim {}, cutoff {})", alg.name(), alg.dim(), alg.cutoff()))
                .line(format!("dims by weight: {}", dims.join(" "))))
        }
        Command::Cohomology(CohomologyCmd::Dims { algebra, module, max_degree, weight }) => {
            cohomology_dims(g, *algebra, *module, *max_degree, *weight)
        }
        Command::Cohomology(CohomologyCmd::Class { which }) => class(g, *which),
        Command::Darboux(DarbouxCmd::Normalize { form }) => normalize(g, form),
        Command::Darboux(DarbouxCmd::Transport { form, a, b, samples }) => transport(g, form, a, b, *samples),
        Command::Verify { suite } => {
            let checks = suites::run(*suite, g.params(), g.fault());
            Ok(Outcome::new(json!({ "suite": format!("{suite:?}").to_lowercase() })).checks(checks))
        }
    }
}

fn weyl(g: &Global, cmd: &WeylCmd) -> Result<Outcome, CliError> {
    let spec = g.spec();
    let elt = |name: &str, src: &str| expr::eval_weyl(&parse(name, src)?, spec).map_err(eval_err(name, src));
    let (label, value) = match cmd {
        WeylCmd::Mul { a, b } => ("a * b", elt("a", a)?.star(&elt("b", b)?)?),
        WeylCmd::Comm { a, b } => ("[a, b]", elt("a", a)?.commutator(&elt("b", b)?)?),
        WeylCmd::Iota { a } => ("iota(a)", elt("a", a)?.iota()),
    };
    Ok(Outcome::new(json!({ "display": value.to_string(), "value": value.to_json() }))
        .line(format!("{label} = {value}  in D_{} at N={}", spec.p, spec.n)))
}

fn poisson(g: &Global, a: &str, b: &str, form: Option<&str>) -> Result<Outcome, CliError> {
    let n = g.n;
    let fa = expr::eval_poly(&parse("a", a)?, g.d, n).map_err(eval_err("a", a))?;
    let fb = expr::eval_poly(&parse("b", b)?, g.d, n).map_err(eval_err("b", b))?;
    match form {
        None => {
            let value = PoissonBivector::standard(g.d, n).bracket(&fa, &fb)?;
            let induced = induced_poisson(&fa, &fb)?;
            let check = Check::from_bool(
                "agrees with (1/h)[a, b] mod h in the Weyl algebra",
                induced == value,
                json!({ "induced": induced.to_string() }),
            );
            Ok(Outcome::new(json!({ "display": value.to_string(), "value": value.to_json() }))
                .line(format!("{{a, b}} = {value}"))
                .check(check))
        }
        Some(src) => {
            let w = expr::eval_form(&parse("form", src)?, g.d, n).map_err(eval_err("form", src))?;
            let sw = check_symplectic(&w)?;
            // the bivector is exact to N-2, and so is the bracket
            let theta = form_to_bivector(&sw)?.with_cutoff(n);
            let value = theta.bracket(&fa, &fb)?.truncate(n.saturating_sub(2));
            Ok(Outcome::new(json!({ "display": value.to_string(), "value": value.to_json() }))
                .line(format!("{{a, b}} = {value}  (exact to weight {})", value.cutoff())))
        }
    }
}

fn build_algebra(name: AlgebraName, g: &Global) -> Result<Arc<GradedLieAlgebra>, LieError> {
    Ok(match name {
        AlgebraName::A => build_a(g.d, g.n)?.algebra,
        AlgebraName::H => build_h(g.d, g.n)?.algebra,
        AlgebraName::Sp => build_sp(g.d)?.algebra,
        AlgebraName::W => build_w(g.d, g.n)?.algebra,
        AlgebraName::W0 => build_w0(g.d, g.n)?.algebra,
        AlgebraName::G => build_g(g.d, g.p, g.n)?.algebra,
        AlgebraName::Derd => build_derd(g.d, g.p, g.n)?.algebra,
    })
}

fn cohomology_dims(
    g: &Global,
    algebra: AlgebraName,
    module: ModuleName,
    max_degree: usize,
    weight: Option<i32>,
) -> Result<Outcome, CliError> {
    let alg = build_algebra(algebra, g)?;
    let m = match module {
        ModuleName::Trivial => LieModule::trivial("k", alg.clone(), vec![BasisElement::new("1", 0)]),
        ModuleName::Adjoint => LieModule::adjoint(alg.clone()),
    };
    let (amin, amax) = (alg.min_weight(), alg.max_weight());
    let mmin = m.basis().iter().map(|b| b.weight).min().unwrap_or(0);
    let mmax = m.max_weight();
    let mut blocks = Vec::new();
    let mut out = Outcome::default().line(format!("H^k({}, {}) by cochain weight w", alg.name(), m.name()));
    for k in 0..=max_degree {
        let kk = k as i32;
        let (lo, hi) = match weight {
            Some(w) => (w, w),
            None => (mmin - kk * amax, mmax - kk * amin),
        };
        let mut row = Vec::new();
        for w in lo..=hi {
            match cohomology_dim(&m, k, w) {
                Ok(dim) => {
                    row.push(format!("w={w}:{dim}"));
                    blocks.push(json!({ "k": k, "w": w, "dim": dim }));
                }
                Err(CohomologyError::IncompleteBlock { reason, .. }) => {
                    blocks.push(json!({ "k": k, "w": w, "incomplete": reason }));
                }
                Err(e) => return Err(e.into()),
            }
        }
        let row = if row.is_empty() { "(no block is exact at this cutoff)".to_string() } else { row.join(" ") };
        out = out.line(format!("  k={k}: {row}"));
    }
    out.result = json!({ "algebra": alg.name(), "module": m.name(), "blocks": blocks });
    Ok(out)
}

fn class(g: &Global, which: ClassName) -> Result<Outcome, CliError> {
    match which {
        ClassName::Omega => {
            let o = omega_class(g.d, g.n)?;
            let rep = o.class.representative.to_json(&o.h.algebra, &o.module.labels());
            Ok(Outcome::new(json!({ "class": "omega", "degree": o.class.degree, "weight": o.class.weight, "representative": rep }))
                .line(format!("omega: degree {} cocycle on {}", o.class.degree, o.h.algebra.name()))
                .checks(omega_checks(&o)))
        }
        ClassName::Tower => {
            let t = tower_obstruction(g.d, g.p, g.n)?;
            let rep = t.class.representative.to_json(&t.derd.algebra, &t.module.labels());
            Ok(Outcome::new(json!({ "class": "tower", "degree": t.class.degree, "weight": t.class.weight, "module_dim": t.module.dim(), "representative": rep }))
                .line(format!(
                    "tower obstruction: degree {} cocycle on {} with values in a module of dimension {}",
                    t.class.degree,
                    t.derd.algebra.name(),
                    t.module.dim()
                ))
                .checks(t.checks(g.seed)))
        }
    }
}

fn normalize(g: &Global, form: &str) -> Result<Outcome, CliError> {
    let w = expr::eval_form(&parse("form", form)?, g.d, g.n).map_err(eval_err("form", form))?;
    let sw = check_symplectic(&w)?;
    let phi = darboux_normalize(&sw, g.n)?;
    let residual = darboux_residual(&w, &phi)?;
    let mut out = Outcome::new(json!({ "chart": phi.to_json(), "residual": residual.to_string() }));
    for (c, comp) in phi.components().iter().enumerate() {
        out = out.line(format!("{} -> {comp}", dqkit_core::Monomial::coord_name(g.d, c)));
    }
    let check = Check::from_bool(
        "pullback residual is zero",
        residual.is_zero(),
        json!({ "residual": residual.to_string() }),
    );
    Ok(out.line(format!("residual: {residual}")).check(check))
}

fn transport(g: &Global, form: &str, a: &str, b: &str, samples: usize) -> Result<Outcome, CliError> {
    let w = expr::eval_form(&parse("form", form)?, g.d, g.n).map_err(eval_err("form", form))?;
    let fa = expr::eval_poly(&parse("a", a)?, g.d, g.n).map_err(eval_err("a", a))?;
    let fb = expr::eval_poly(&parse("b", b)?, g.d, g.n).map_err(eval_err("b", b))?;
    let sw = check_symplectic(&w)?;
    let phi = darboux_normalize(&sw, g.n)?;
    let star = TransportedStar::new(phi, g.spec())?;
    let value = star.star(&fa, &fb)?;
    let bracket = star.induced_bracket(&fa, &fb).ok();
    let mut out = Outcome::new(json!({
        "display": value.to_string(),
        "value": value.to_json(),
        "chart": star.chart().to_json(),
        "induced_bracket": bracket.as_ref().map(|p| p.to_string()),
    }))
    .line(format!("a *' b = {value}"));
    if let Some(br) = bracket {
        out = out.line(format!("(1/h)[a, b] mod h = {br}"));
    }
    Ok(out.checks(star.axiom_checks(&sw, g.seed, samples)))
}
