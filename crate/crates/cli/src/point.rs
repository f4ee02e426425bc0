//! Single configurations and sweeps over the energy variable.

use crate::output::{fmt_num, Cell, Table};
use crate::{usage, CliResult, FamilyKind, Opts, RepKind, StateKind, TestKind};
use cvbell::conditional::{ConditionalParams, TwoGaussianWigner};
use cvbell::dp::{family_value, optimize_target, DpFamily, DpTarget};
use cvbell::gaussian::{make_t, make_twb, make_vlb, vlb_photon_number, vlb_squeezing, TripartitePhotonNumbers};
use cvbell::homodyne::{b2_h, HomodyneSettings, HomodyneSource};
use cvbell::optim::maximize_angles;
use cvbell::ps::{b2_ps_from_f, b3_ps, b3_ps_max, coeffs_vlb_pi, f_conditional, f_traced, f_twb, Representation, ANGLE_GRID};
use rayon::prelude::*;
use std::f64::consts::PI;

const CONDITIONAL_DP_N2N3: f64 = 1e-2;

#[derive(Clone, Debug)]
struct Config {
    state: StateKind,
    test: TestKind,
    family: Option<FamilyKind>,
    rep: Representation,
    n2: Option<f64>,
    n3: Option<f64>,
    phi2: f64,
    phi3: f64,
    eta: f64,
    j: Option<f64>,
    tol: f64,
}

type Record = Vec<(&'static str, Cell)>;

fn name_state(s: StateKind) -> &'static str {
    match s {
        StateKind::Vlb => "vlb",
        StateKind::T => "t",
        StateKind::Twb => "twb",
        StateKind::Conditional => "conditional",
    }
}

fn name_test(t: TestKind) -> &'static str {
    match t {
        TestKind::Dp2 => "dp2",
        TestKind::Dp3 => "dp3",
        TestKind::Ps2 => "ps2",
        TestKind::Ps3 => "ps3",
        TestKind::Homodyne => "homodyne",
    }
}

fn forbid(set: bool, flag: &str, rule: &str) -> CliResult<()> {
    if set {
        return usage(format!("{flag} is not accepted: {rule}"));
    }
    Ok(())
}

fn dp_family(state: StateKind, family: Option<FamilyKind>) -> CliResult<DpFamily> {
    Ok(match (state, family) {
        (StateKind::Vlb, None) => DpFamily::VlbSymmetric,
        (StateKind::T, None | Some(FamilyKind::Sym)) => DpFamily::TSymmetric,
        (StateKind::T, Some(FamilyKind::Opt)) => DpFamily::TOptimized,
        (StateKind::Twb, None | Some(FamilyKind::Improved)) => DpFamily::TwbImproved,
        (StateKind::Twb, Some(FamilyKind::Bw)) => DpFamily::TwbBanaszek,
        (StateKind::Conditional, None) => DpFamily::Conditional,
        (s, Some(f)) => return usage(format!("--family {f:?} is not defined for displaced parity on {}", name_state(s))),
    })
}

fn family_name(f: DpFamily) -> &'static str {
    match f {
        DpFamily::VlbSymmetric | DpFamily::TSymmetric => "sym",
        DpFamily::TOptimized => "opt",
        DpFamily::TwbImproved => "improved",
        DpFamily::TwbBanaszek => "bw",
        DpFamily::Conditional => "conditional",
    }
}

/// Name of the swept variable for each state.
fn sweep_var(state: StateKind) -> &'static str {
    match state {
        StateKind::Vlb => "r",
        StateKind::T | StateKind::Twb => "n",
        StateKind::Conditional => "n2",
    }
}

fn resolve(o: &Opts) -> CliResult<(Config, Vec<f64>)> {
    let Some(state) = o.state else { return usage("--state is required") };
    let Some(test) = o.test else { return usage("--test is required") };
    let three = matches!(state, StateKind::Vlb | StateKind::T);
    match test {
        TestKind::Dp3 | TestKind::Ps3 if !three => {
            return usage(format!("{} needs a three-mode state (vlb or t)", name_test(test)))
        }
        TestKind::Dp2 | TestKind::Ps2 | TestKind::Homodyne if three => {
            return usage(format!("{} needs a two-mode state (twb or conditional)", name_test(test)))
        }
        _ => {}
    }
    let dp = matches!(test, TestKind::Dp2 | TestKind::Dp3);
    forbid(o.j.is_some() && !dp, "--j", "it applies to displaced-parity tests only")?;
    forbid(o.optimize && !dp, "--optimize", "it applies to displaced-parity tests only")?;
    forbid(o.j.is_some() && o.optimize, "--j", "--j and --optimize are mutually exclusive")?;
    if dp && o.j.is_none() && !o.optimize {
        return usage("displaced-parity tests need --j or --optimize");
    }
    if let Some(j) = o.j {
        if !(j >= 0.0 && j.is_finite()) {
            return usage("--j must be finite and nonnegative");
        }
    }
    forbid(o.rep.is_some() && test != TestKind::Ps3, "--rep", "it applies to ps3 only")?;
    let rep = match (state, o.rep) {
        (StateKind::Vlb, Some(RepKind::S)) => return usage("ps3 on vlb is only defined in the pi representation"),
        (StateKind::Vlb, _) | (_, Some(RepKind::Pi)) => Representation::Pi,
        _ => Representation::S,
    };
    let family = o.family;
    match (test, family) {
        (_, None) => {}
        (TestKind::Dp2 | TestKind::Dp3, f) => {
            dp_family(state, f)?;
        }
        (TestKind::Ps2, Some(FamilyKind::F1 | FamilyKind::Traced)) if state == StateKind::Conditional => {}
        (t, Some(f)) => return usage(format!("--family {f:?} is not defined for {} on {}", name_test(t), name_state(state))),
    }

    let photons = matches!(state, StateKind::T | StateKind::Conditional);
    forbid(o.r.is_some() && !matches!(state, StateKind::Vlb | StateKind::Twb), "--r", "only vlb and twb are parametrized by r")?;
    forbid(o.n.is_some() && state == StateKind::Conditional, "--n", "the conditional state takes --n2 and --n3")?;
    forbid((o.n2.is_some() || o.n3.is_some()) && !photons, "--n2/--n3", "only t and conditional take per-mode photon numbers")?;
    forbid((o.phi2.is_some() || o.phi3.is_some()) && !photons, "--phi2/--phi3", "only t and conditional carry phases")?;
    forbid(o.eta.is_some() && state != StateKind::Conditional, "--eta", "detector efficiency applies to the conditional state")?;
    forbid(o.r.is_some() && o.n.is_some(), "--r", "give either --r or --n")?;
    forbid(o.n.is_some() && (o.n2.is_some() || o.n3.is_some()), "--n", "give either --n or --n2 with --n3")?;

    let var = sweep_var(state);
    let xs = match o.grid {
        Some(g) => {
            let clash = match state {
                StateKind::Vlb => o.r.is_some() || o.n.is_some(),
                StateKind::T => o.n.is_some() || o.n2.is_some() || o.n3.is_some(),
                StateKind::Twb => o.r.is_some() || o.n.is_some(),
                StateKind::Conditional => o.n2.is_some(),
            };
            forbid(clash, "the energy flag", &format!("--grid sweeps {var}"))?;
            g.points()
        }
        None => vec![match state {
            StateKind::Vlb => match (o.r, o.n) {
                (Some(r), _) => r,
                (_, Some(n)) => vlb_squeezing(n),
                _ => return usage("vlb needs --r or --n"),
            },
            StateKind::T => match (o.n, o.n2, o.n3) {
                (Some(n), _, _) => n,
                (None, Some(_), Some(_)) => f64::NAN,
                _ => return usage("t needs --n, or --n2 together with --n3"),
            },
            StateKind::Twb => match (o.r, o.n) {
                (Some(r), _) => 2.0 * r.sinh().powi(2),
                (_, Some(n)) => n,
                _ => return usage("twb needs --n or --r"),
            },
            StateKind::Conditional => match o.n2 {
                Some(n2) => n2,
                None => return usage("conditional needs --n2"),
            },
        }],
    };
    if state == StateKind::Conditional && o.n3.is_none() && test != TestKind::Dp2 {
        return usage("conditional needs --n3 (only dp2 defaults it to 0.01/n2)");
    }
    let default_phases = match (state, test, family) {
        (StateKind::T, TestKind::Dp3, None | Some(FamilyKind::Sym)) => (PI, PI),
        (StateKind::T, TestKind::Dp3, Some(FamilyKind::Opt)) => (0.0, PI),
        _ => (0.0, 0.0),
    };
    let cfg = Config {
        state,
        test,
        family,
        rep,
        n2: o.n2,
        n3: o.n3,
        phi2: o.phi2.unwrap_or(default_phases.0),
        phi3: o.phi3.unwrap_or(default_phases.1),
        eta: o.eta.unwrap_or(1.0),
        j: o.j,
        tol: o.tol()?,
    };
    Ok((cfg, xs))
}

impl Config {
    fn t_photons(&self, x: f64) -> CliResult<TripartitePhotonNumbers<f64>> {
        Ok(if x.is_nan() {
            TripartitePhotonNumbers::new(self.n2.unwrap(), self.n3.unwrap(), self.phi2, self.phi3)?
        } else {
            TripartitePhotonNumbers::symmetric(x, self.phi2, self.phi3)?
        })
    }

    fn conditional(&self, n2: f64) -> CliResult<ConditionalParams<f64>> {
        let n3 = match self.n3 {
            Some(n3) => n3,
            None if n2 > 0.0 => CONDITIONAL_DP_N2N3 / n2,
            None => return usage("n2 must be positive when --n3 defaults to 0.01/n2"),
        };
        Ok(ConditionalParams::new(n2, n3, self.phi2, self.phi3, self.eta)?)
    }

    /// Parameter columns of a record.
    fn params(&self, x: f64, rec: &mut Record) -> CliResult<()> {
        match self.state {
            StateKind::Vlb => {
                rec.push(("r", x.into()));
                rec.push(("n", vlb_photon_number(x).into()));
            }
            StateKind::T => {
                let p = self.t_photons(x)?;
                rec.push(("n", p.total().into()));
                rec.push(("n2", p.n2.into()));
                rec.push(("n3", p.n3.into()));
                rec.push(("phi2", p.phi2.into()));
                rec.push(("phi3", p.phi3.into()));
            }
            StateKind::Twb => rec.push(("n", x.into())),
            StateKind::Conditional => {
                let p = self.conditional(x)?;
                rec.push(("n2", p.n2.into()));
                rec.push(("n3", p.n3.into()));
                rec.push(("phi2", p.phi2.into()));
                rec.push(("phi3", p.phi3.into()));
                rec.push(("eta", p.eta.into()));
            }
        }
        Ok(())
    }

    fn eval(&self, x: f64) -> CliResult<Record> {
        let mut rec: Record = vec![("state", name_state(self.state).into()), ("test", name_test(self.test).into())];
        self.params(x, &mut rec)?;
        match self.test {
            TestKind::Dp2 | TestKind::Dp3 => self.eval_dp(x, &mut rec)?,
            TestKind::Ps3 => self.eval_ps3(x, &mut rec)?,
            TestKind::Ps2 => self.eval_ps2(x, &mut rec)?,
            TestKind::Homodyne => self.eval_homodyne(x, &mut rec)?,
        }
        Ok(rec)
    }

    fn eval_dp(&self, x: f64, rec: &mut Record) -> CliResult<()> {
        let family = dp_family(self.state, self.family)?;
        let target = match self.state {
            StateKind::Vlb => DpTarget::Gaussian(make_vlb(x)?),
            StateKind::T => DpTarget::Gaussian(make_t(&self.t_photons(x)?)?),
            StateKind::Twb => DpTarget::Gaussian(make_twb(x)?),
            StateKind::Conditional => DpTarget::Conditional(TwoGaussianWigner::new(&self.conditional(x)?)?),
        };
        rec.insert(2, ("family", family_name(family).into()));
        match self.j {
            Some(j) => {
                let v = family_value(family, &target, j)?;
                rec.push(("j", j.into()));
                push_value(rec, v);
            }
            None => {
                let o = optimize_target(family, &target, self.tol)?;
                rec.push(("j", o.j_opt.into()));
                push_value(rec, o.value.value);
                rec.push(("evaluations", o.scan.evaluations.into()));
                rec.push(("bracket", o.scan.bracket[0].into()));
            }
        }
        Ok(())
    }

    fn eval_ps3(&self, x: f64, rec: &mut Record) -> CliResult<()> {
        let rep = self.rep;
        rec.insert(2, ("rep", if rep == Representation::S { "s" } else { "pi" }.into()));
        let v = match self.state {
            StateKind::Vlb => b3_ps_max(&coeffs_vlb_pi(x)?, rep, self.tol)?,
            _ => {
                let p = self.t_photons(x)?;
                if rep == Representation::Pi && p.n2 != p.n3 {
                    return usage("the pi representation of t needs n2 = n3");
                }
                b3_ps(p.n2, p.n3, rep, self.tol)?
            }
        };
        push_value(rec, v.value);
        if let cvbell::Settings::Ps(s) = &v.settings {
            for (k, t) in s.thetas.iter().chain(&s.thetas_primed).enumerate() {
                rec.push((THETA_NAMES[k], (*t).into()));
            }
        }
        Ok(())
    }

    fn eval_ps2(&self, x: f64, rec: &mut Record) -> CliResult<()> {
        let f = match self.state {
            StateKind::Twb => f_twb(x)?,
            _ => {
                let p = self.conditional(x)?;
                match self.family {
                    Some(FamilyKind::Traced) => f_traced(&p, self.tol)?,
                    _ => f_conditional(&p, self.tol)?,
                }
            }
        };
        if self.state == StateKind::Conditional {
            let which = if self.family == Some(FamilyKind::Traced) { "traced" } else { "f1" };
            rec.insert(2, ("family", which.into()));
        }
        rec.push(("f", f.into()));
        let (v, a) = b2_ps_from_f(f)?;
        push_value(rec, v.value);
        rec.push(("theta1", a.theta1.into()));
        rec.push(("theta1p", a.theta1_primed.into()));
        rec.push(("theta2", a.theta2.into()));
        rec.push(("theta2p", a.theta2_primed.into()));
        Ok(())
    }

    fn eval_homodyne(&self, x: f64, rec: &mut Record) -> CliResult<()> {
        let source = match self.state {
            StateKind::Twb => HomodyneSource::Gaussian(make_twb(x)?),
            _ => {
                let p = self.conditional(x)?;
                if p.phi3 == 0.0 {
                    HomodyneSource::rho1(&p)?
                } else {
                    HomodyneSource::ConditionalExact(p)
                }
            }
        };
        let settings = |a: &[f64]| HomodyneSettings { thetas: [a[0], a[1]], phis: [a[2], a[3]] };
        let mut err = None;
        let scan = maximize_angles(
            |a: &[f64]| match b2_h(&source, &settings(a)) {
                Ok(b) => b.value,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            4,
            ANGLE_GRID,
            self.tol,
        )?;
        if let Some(e) = err {
            return Err(e.into());
        }
        push_value(rec, scan.max_value);
        for (name, a) in ["theta", "theta_p", "phi", "phi_p"].iter().zip(&scan.arg_max) {
            rec.push((name, (*a).into()));
        }
        rec.push(("evaluations", scan.evaluations.into()));
        Ok(())
    }
}

const THETA_NAMES: [&str; 6] = ["theta1", "theta2", "theta3", "theta1p", "theta2p", "theta3p"];

fn push_value(rec: &mut Record, v: f64) {
    rec.push(("value", v.into()));
    rec.push(("violates", (v > 2.0).into()));
}

pub fn run(o: &Opts) -> CliResult<(Table, String)> {
    let (cfg, xs) = resolve(o)?;
    let records: Vec<Record> = xs.par_iter().map(|&x| cfg.eval(x)).collect::<CliResult<_>>()?;
    let columns: Vec<&str> = records[0].iter().map(|(k, _)| *k).collect();
    let mut table = Table::new(&columns);
    table.rows = records.into_iter().map(|r| r.into_iter().map(|(_, c)| c).collect()).collect();
    let mut desc = format!("state={} test={}", name_state(cfg.state), name_test(cfg.test));
    if let Some(g) = o.grid {
        desc += &format!(" grid {}={}", sweep_var(cfg.state), g.describe());
    }
    if let Some(j) = cfg.j {
        desc += &format!(" j={}", fmt_num(j));
    }
    Ok((table, desc))
}
