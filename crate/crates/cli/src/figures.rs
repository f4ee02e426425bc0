//! Figure tables with caption parameters pinned.

use crate::output::{fmt_num, Cell, Table};
use crate::{usage, CliError, CliResult, Grid};
use cvbell::conditional::ConditionalParams;
use cvbell::dp::{b3_t_closed, b3_vlb_closed, family_value, optimize_closed, DpFamily, DpTarget};
use cvbell::gaussian::vlb_squeezing;
use cvbell::homodyne::{classical_reference, e_h_rho1, HomodyneSetting};
use cvbell::ps::{b3_ps_max, coeffs_t_pi, coeffs_vlb_pi, f_conditional, f_traced, f_twb, Representation};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    B3DPVLBGen,
    B3DPT,
    B3DPN,
    B3PS,
    B2DPTWBA,
    B2PS,
    E2H,
}

const ALL: [FigureId; 7] = [
    FigureId::B3DPVLBGen,
    FigureId::B3DPT,
    FigureId::B3DPN,
    FigureId::B3PS,
    FigureId::B2DPTWBA,
    FigureId::B2PS,
    FigureId::E2H,
];

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::B3DPVLBGen => "B3DPVLBGen",
            FigureId::B3DPT => "B3DPT",
            FigureId::B3DPN => "B3DPN",
            FigureId::B3PS => "B3PS",
            FigureId::B2DPTWBA => "B2DPTWBA",
            FigureId::B2PS => "B2PS",
            FigureId::E2H => "E2H",
        }
    }

    /// Swept variable and its default grid.
    fn axis(self) -> (&'static str, Grid) {
        match self {
            FigureId::B3DPVLBGen => ("r", Grid::new(0.0, 3.0, 31)),
            FigureId::B3DPT => ("N", Grid::new(0.5, 10.0, 20)),
            FigureId::B3DPN => ("N", Grid::new(0.1, 20.0, 200)),
            FigureId::B3PS => ("N", Grid::new(0.1, 3.0, 30)),
            FigureId::B2DPTWBA => ("N2", Grid::new(0.5, 10.0, 20)),
            FigureId::B2PS => ("N", Grid::new(0.2, 10.0, 99)),
            FigureId::E2H => ("psi", Grid::new(-PI, PI, 201)),
        }
    }
}

impl FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        ALL.iter().copied().find(|f| f.name() == s).ok_or_else(|| {
            let names: Vec<_> = ALL.iter().map(|f| f.name()).collect();
            CliError::Usage(format!("unknown figure id {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

const J_AXIS_VLB: Grid = Grid::new(0.0, 0.2, 41);
const J_AXIS_T: Grid = Grid::new(0.0, 1.0, 41);
const J_AXIS_COND: Grid = Grid::new(0.0, 0.2, 41);
const B2PS_N3: f64 = 0.1;
const B2PS_ETA: f64 = 0.8;
const E2H_N3: f64 = 0.5;
const E2H_N2: [f64; 3] = [0.5, 1.0, 5.0];

fn rows<F>(xs: &[f64], f: F) -> CliResult<Vec<Vec<Cell>>>
where
    F: Fn(f64) -> CliResult<Vec<Vec<Cell>>> + Sync,
{
    let parts: Vec<_> = xs.par_iter().map(|&x| f(x)).collect::<CliResult<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Rows `(x, J, B)` with `B > 2` over the `J` axis.
fn violating(x: f64, js: &[f64], b: impl Fn(f64) -> cvbell::Result<f64>) -> CliResult<Vec<Vec<Cell>>> {
    let mut out = Vec::new();
    for &j in js {
        let v = b(j)?;
        if v > 2.0 {
            out.push(vec![x.into(), j.into(), v.into()]);
        }
    }
    Ok(out)
}

fn opt(f: impl Fn(f64) -> f64, tol: f64) -> CliResult<f64> {
    Ok(optimize_closed(f, tol)?.0)
}

pub fn run(id: FigureId, grid: Option<Grid>, tol: f64) -> CliResult<Table> {
    let (var, default) = id.axis();
    let g = grid.unwrap_or(default);
    let xs = g.points();
    let mut notes = vec![format!("grid {var}={}", g.describe())];
    let table = match id {
        FigureId::B3DPVLBGen => {
            let js = J_AXIS_VLB.points();
            notes.push(format!("J={}; family vlb symmetric; rows with B3 > 2 only", J_AXIS_VLB.describe()));
            let mut t = Table::new(&["r", "J", "B3"]);
            t.rows = rows(&xs, |r| violating(r, &js, |j| Ok(b3_vlb_closed(r, j).value)))?;
            t
        }
        FigureId::B3DPT => {
            let js = J_AXIS_T.points();
            notes.push(format!("J={}; family t optimized, phi2=0 phi3=pi; rows with B3 > 2 only", J_AXIS_T.describe()));
            let mut t = Table::new(&["N", "J", "B3"]);
            t.rows = rows(&xs, |n| {
                let target = DpTarget::for_family(DpFamily::TOptimized, n)?;
                violating(n, &js, |j| family_value(DpFamily::TOptimized, &target, j))
            })?;
            t
        }
        FigureId::B3DPN => {
            notes.push("J optimized at each N; vlb r from N=3sinh^2(r); t with N2=N3=N/4".into());
            let mut t = Table::new(&["N", "B3_vlb_opt", "B3_t_opt"]);
            t.rows = rows(&xs, |n| {
                let r = vlb_squeezing(n);
                let v = opt(|j| b3_vlb_closed(r, j).value, tol)?;
                let w = opt(|j| b3_t_closed(n, j).value, tol)?;
                Ok(vec![vec![n.into(), v.into(), w.into()]])
            })?;
            t
        }
        FigureId::B3PS => {
            notes.push("pi representation; angles optimized; vlb r from N=3sinh^2(r)".into());
            let mut t = Table::new(&["N", "B3_ps_t", "B3_ps_vlb"]);
            t.rows = rows(&xs, |n| {
                let a = b3_ps_max(&coeffs_t_pi(n)?, Representation::Pi, tol)?.value;
                let b = b3_ps_max(&coeffs_vlb_pi(vlb_squeezing(n))?, Representation::Pi, tol)?.value;
                Ok(vec![vec![n.into(), a.into(), b.into()]])
            })?;
            t
        }
        FigureId::B2DPTWBA => {
            let js = J_AXIS_COND.points();
            notes.push(format!("J={}; conditional family, N3=0.01/N2, eta=1; rows with B2 > 2 only", J_AXIS_COND.describe()));
            let mut t = Table::new(&["N2", "J", "B2"]);
            t.rows = rows(&xs, |n2| {
                let target = DpTarget::for_family(DpFamily::Conditional, n2)?;
                violating(n2, &js, |j| family_value(DpFamily::Conditional, &target, j))
            })?;
            t
        }
        FigureId::B2PS => {
            notes.push(format!("eta={} N3={}; N2=N/2-N3", fmt_num(B2PS_ETA), fmt_num(B2PS_N3)));
            if xs[0] < 2.0 * B2PS_N3 {
                return usage(format!("B2PS needs N >= {} (N2 = N/2 - N3 must be nonnegative)", fmt_num(2.0 * B2PS_N3)));
            }
            let mut t = Table::new(&["N", "f_twb", "f_1", "f_tr"]);
            t.rows = rows(&xs, |n| {
                let p = ConditionalParams::new((n / 2.0 - B2PS_N3).max(0.0), B2PS_N3, 0.0, 0.0, B2PS_ETA)?;
                let cells = vec![n.into(), f_twb(n)?.into(), f_conditional(&p, tol)?.into(), f_traced(&p, tol)?.into()];
                Ok(vec![cells])
            })?;
            t
        }
        FigureId::E2H => {
            notes.push(format!("N3={} eta=1 phi2=phi3=0; E_classical=1-2|psi|/pi", fmt_num(E2H_N3)));
            let ps: Vec<ConditionalParams<f64>> = E2H_N2
                .iter()
                .map(|&n2| ConditionalParams::new(n2, E2H_N3, 0.0, 0.0, 1.0))
                .collect::<cvbell::Result<_>>()?;
            let mut t = Table::new(&["psi", "E_classical", "E_n2_0.5", "E_n2_1", "E_n2_5"]);
            t.rows = rows(&xs, |psi| {
                let mut row: Vec<Cell> = vec![psi.into(), classical_reference(psi).into()];
                for p in &ps {
                    row.push(e_h_rho1(p, &HomodyneSetting::new(psi, 0.0))?.into());
                }
                Ok(vec![row])
            })?;
            t
        }
    };
    Ok(Table { provenance: notes, ..table })
}
