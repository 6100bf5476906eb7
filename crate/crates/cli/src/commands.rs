use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use mixfrob::amodel::{local_a_pipeline, GWTable, ToricSurfaceData};
use mixfrob::bmodel::{
    b_model_pipeline, check_h2_generation, gm_connection, is_delta_regular, jacobian_ring, weight_filtration_on_r,
    JacobianRingData, LaurentPoly,
};
use mixfrob::io::{flag_from_json, flag_to_json, jmat_from_json, jmat_to_json, parse_json, to_value};
use mixfrob::io::{JMatJson, MFSJson, RingJson, StructureJson, WeightStep};
use mixfrob::limit_mhs::{limit_mixed, NilpotentData};
use mixfrob::linalg::{QMat, QSubspace};
use mixfrob::polytope::LatticePolytope;
use mixfrob::trtlep::{check_mixed_trtlep, check_opposite, rees_construct, tate_twist, Certificate, ReesInput};
use mixfrob::unfolding::{extend_pairings, unfold, unfolding_certificate, universal_unfold, UnfoldingResult};
use mixfrob::{Error, Rat};

use crate::{AmodelCmd, BmodelCmd, Command, LimitCmd, PolytopeCmd, TrtlepCmd, UnfoldCmd, VerifyCmd};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    /// A mathematical condition failed before any report could be produced.
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::DimensionMismatch(_)
            | Error::NotFullDimensional
            | Error::UnsupportedDimension(_)
            | Error::InconsistentTruncation
            | Error::NewtonPolytopeMismatch
            | Error::NotSmoothFan(_)
            | Error::ZeroVector
            | Error::CutoffTooSmall { .. }
            | Error::TooLarge(..) => CliError::Input(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

type Res<T> = Result<T, CliError>;

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Res<T> {
    parse_json(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn rat(s: &str) -> Res<Rat> {
    s.trim().parse().map_err(|_| CliError::Input(format!("bad rational {s:?}")))
}

fn certified(mut report: Value, certs: &[Certificate]) -> Outcome {
    report["certificates"] = to_value(&certs);
    Outcome { report, passed: certs.iter().all(Certificate::passed) }
}

pub fn run(cmd: &Command, quiet: bool) -> Res<Outcome> {
    match cmd {
        Command::Polytope(PolytopeCmd::Check { file, kmax }) => polytope_check(file, *kmax),
        Command::Bmodel(c) => bmodel(c),
        Command::Trtlep(c) => trtlep(c),
        Command::Unfold(c) => unfold_cmd(c),
        Command::Limit(LimitCmd::Run { file, twist }) => limit_run(file, twist.as_deref()),
        Command::Amodel(AmodelCmd::Pipeline { fan, gw, z, order, n, cutoff }) => {
            amodel_pipeline(fan, gw, z, *order, *n, *cutoff)
        }
        Command::Verify(VerifyCmd::All { seed }) => {
            let reports = mixfrob::verify::run_all(*seed);
            if !quiet {
                for r in &reports {
                    eprintln!("{r}");
                }
            }
            let passed = reports.iter().all(|r| r.passed);
            Ok(Outcome { report: json!({ "criteria": to_value(&reports), "passed": passed }), passed })
        }
    }
}

fn polytope_check(file: &Path, kmax: u32) -> Res<Outcome> {
    let p = LatticePolytope::parse(&read(file)?)?;
    let reflexive = p.is_reflexive();
    let counts: Vec<usize> = (0..=kmax).map(|k| p.lattice_points(k).points.len()).collect();
    let mut report = json!({
        "dim": p.dim(),
        "vertices": p.vertices(),
        "reflexive": reflexive,
        "lattice_points": counts,
        "degree_one_generation": to_value(&p.degree_one_generates(kmax)),
    });
    if reflexive {
        report["dual_vertices"] = json!(p.dual_polytope()?.vertices());
    }
    if p.dim() == 2 {
        report["fano"] = json!(p.is_fano_d2()?);
    }
    Ok(Outcome { report, passed: true })
}

fn laurent(file: &Path) -> Res<LaurentPoly> {
    let text = read(file)?;
    let dim = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.split_once(':'))
        .map(|(lhs, _)| lhs.split_whitespace().count())
        .ok_or_else(|| CliError::Input(format!("{}: no terms", file.display())))?;
    Ok(LaurentPoly::parse(dim, &text)?)
}

fn ring_of(file: &Path) -> Res<(LaurentPoly, JacobianRingData)> {
    let f = laurent(file)?;
    let jr = jacobian_ring(&f, &f.newton_polytope()?)?;
    Ok((f, jr))
}

fn bmodel(cmd: &BmodelCmd) -> Res<Outcome> {
    match cmd {
        BmodelCmd::Ring(a) => {
            let (_, jr) = ring_of(&a.file)?;
            let w = weight_filtration_on_r(&jr)?;
            let basis: Vec<Value> = jr.basis.iter().map(|(k, m)| json!({ "degree": k, "exponent": m })).collect();
            let graded: BTreeMap<i32, usize> = w.flag.weights().into_iter().map(|k| (k, w.flag.graded_dim(k))).collect();
            let report = json!({
                "d": jr.d(),
                "dim": jr.dim(),
                "graded_dims": jr.graded_dims(),
                "basis": basis,
                "weight": to_value(&flag_to_json(&w.flag)),
                "weight_graded_dims": graded,
                "weight_stable": w.stable,
            });
            Ok(Outcome { report, passed: w.stable })
        }
        BmodelCmd::Regular(a) => {
            let f = laurent(&a.file)?;
            let regular = is_delta_regular(&f, &f.newton_polytope()?)?;
            Ok(Outcome { report: json!({ "regular": regular }), passed: regular })
        }
        BmodelCmd::H2(a) => {
            let (_, jr) = ring_of(&a.file)?;
            let h2 = check_h2_generation(&jr);
            Ok(Outcome { passed: h2.holds, report: to_value(&h2) })
        }
        BmodelCmd::Gm { poly, directions, order } => {
            let (_, jr) = ring_of(&poly.file)?;
            let gm = gm_connection(&jr, directions, *order)?;
            let report = json!({
                "directions": gm.directions,
                "ring": to_value(&RingJson::of(&gm.ring)),
                "matrices": gm.matrices.iter().map(|m| to_value(&jmat_to_json(m))).collect::<Vec<_>>(),
            });
            Ok(Outcome { report, passed: true })
        }
        BmodelCmd::Pipeline { poly, directions, order, n } => {
            let (_, jr) = ring_of(&poly.file)?;
            let out = b_model_pipeline(&jr, directions, None, *order, *n)?;
            let report = json!({
                "levels": out.rees.levels,
                "section": out.section,
                "structure": to_value(&StructureJson::of(&out.rees.data)),
                "mfs": to_value(&MFSJson::of(&out.mfs)),
            });
            Ok(certified(report, &out.certificates))
        }
    }
}

#[derive(Deserialize)]
struct HodgeStep {
    p: i32,
    /// Number of columns spanning `F^p`.
    dim: usize,
    columns: JMatJson,
}

#[derive(Deserialize)]
struct OppositeStep {
    l: i32,
    basis: Vec<Vec<Rat>>,
}

#[derive(Deserialize)]
struct ReesJson {
    ring: RingJson,
    rank: usize,
    weight: Vec<WeightStep>,
    hodge: Vec<HodgeStep>,
    opposite: Vec<OppositeStep>,
    polarization: BTreeMap<i32, QMat>,
}

fn trtlep(cmd: &TrtlepCmd) -> Res<Outcome> {
    match cmd {
        TrtlepCmd::Verify { file } => {
            let s: StructureJson = read_json(file)?;
            let t = s.build()?;
            Ok(certified(json!({ "rank": s.rank }), &[check_mixed_trtlep(&t)]))
        }
        TrtlepCmd::Rees { file } => {
            let j: ReesJson = read_json(file)?;
            let ring = j.ring.build()?;
            let n = j.rank;
            let mut hodge = j
                .hodge
                .iter()
                .map(|h| Ok((h.p, jmat_from_json(&ring, n, h.dim, &h.columns)?)))
                .collect::<Res<Vec<_>>>()?;
            hodge.sort_by_key(|(p, _)| -p);
            let mut opposite = j.opposite.iter().map(|o| (o.l, QSubspace::span(n, &o.basis))).collect::<Vec<_>>();
            opposite.sort_by_key(|(l, _)| *l);
            if opposite.iter().any(|(_, u)| u.ambient() != n) || j.opposite.iter().flat_map(|o| &o.basis).any(|v| v.len() != n) {
                return Err(CliError::Input("opposite basis vector of the wrong length".into()));
            }
            let input =
                ReesInput { weight: flag_from_json(n, &j.weight)?, hodge, opposite, polarization: j.polarization };
            let ocert = check_opposite(&input);
            if !ocert.passed() {
                return Ok(certified(json!({}), &[ocert]));
            }
            let out = rees_construct(&input)?;
            let tcert = check_mixed_trtlep(&out.data);
            let report = json!({
                "levels": out.levels,
                "frame": to_value(&jmat_to_json(&out.frame)),
                "structure": to_value(&StructureJson::of(&out.data)),
            });
            Ok(certified(report, &[ocert, tcert]))
        }
        TrtlepCmd::Twist { file, by } => {
            let s: StructureJson = read_json(file)?;
            let tw = tate_twist(&s.build()?, &rat(by)?)?;
            Ok(certified(json!({ "structure": to_value(&StructureJson::of(&tw)) }), &[check_mixed_trtlep(&tw)]))
        }
    }
}

#[derive(Deserialize)]
struct SectionJson {
    structure: StructureJson,
    zeta: Vec<Rat>,
}

#[derive(Deserialize)]
struct UnfoldJson {
    structure: StructureJson,
    zeta: Vec<Rat>,
    y_order: u32,
    /// `d psi / d y_j` as column jets over the ring with the new variables.
    psi_y: Vec<JMatJson>,
}

fn check_zeta(s: &StructureJson, zeta: &[Rat]) -> Res<()> {
    if zeta.len() != s.rank {
        return Err(CliError::Input(format!("section has {} entries, rank is {}", zeta.len(), s.rank)));
    }
    Ok(())
}

fn unfolding_report(r: &UnfoldingResult) -> Value {
    json!({
        "base_vars": r.base_vars,
        "new_vars": r.new_vars(),
        "frame": r.frame.words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "log": to_value(&r.log),
        "structure": to_value(&StructureJson::of(&r.data)),
    })
}

fn unfold_cmd(cmd: &UnfoldCmd) -> Res<Outcome> {
    match cmd {
        UnfoldCmd::Run { file } => {
            let j: UnfoldJson = read_json(file)?;
            check_zeta(&j.structure, &j.zeta)?;
            let t = j.structure.build()?;
            let base = &t.frob.ring;
            let ring = RingJson { t_vars: base.nvars(), y_vars: j.psi_y.len(), order: base.order(), y_order: j.y_order }
                .build()?;
            let psi_y = j.psi_y.iter().map(|p| jmat_from_json(&ring, j.structure.rank, 1, p)).collect::<Result<Vec<_>, _>>()?;
            let res = unfold(&t, &j.zeta, &psi_y)?;
            let cert = unfolding_certificate(&res, &t, &j.zeta, &psi_y);
            Ok(certified(unfolding_report(&res), &[cert]))
        }
        UnfoldCmd::Universal { file, order } => {
            let j: SectionJson = read_json(file)?;
            check_zeta(&j.structure, &j.zeta)?;
            let t = j.structure.build()?;
            let (res, cert) = universal_unfold(&t, &j.zeta, *order)?;
            let (_, pcert) = extend_pairings(&res, &t.pairings);
            Ok(certified(unfolding_report(&res), &[cert, pcert]))
        }
    }
}

#[derive(Deserialize)]
struct LimitJson {
    structure: StructureJson,
    nilpotent: QMat,
}

fn limit_run(file: &Path, twist: Option<&str>) -> Res<Outcome> {
    let j: LimitJson = read_json(file)?;
    if j.nilpotent.rows() != j.structure.rank || j.nilpotent.cols() != j.structure.rank {
        return Err(CliError::Input(format!("nilpotent endomorphism must be {0}x{0}", j.structure.rank)));
    }
    let t = j.structure.build()?;
    let nil = NilpotentData::new(j.nilpotent)?;
    let (mut lim, cert) = limit_mixed(&t, &nil)?;
    let mut certs = vec![cert];
    if let Some(l) = twist {
        lim = tate_twist(&lim, &rat(l)?)?;
        certs.push(check_mixed_trtlep(&lim));
    }
    let report = json!({ "index": nil.index, "structure": to_value(&StructureJson::of(&lim)) });
    Ok(certified(report, &certs))
}

fn amodel_pipeline(fan: &Path, gw: &Path, z: &[String], order: u32, n: u32, cutoff: Option<u32>) -> Res<Outcome> {
    let s = ToricSurfaceData::new(ToricSurfaceData::parse_fan(&read(fan)?)?)?;
    let table = GWTable::parse(&read(gw)?, s.picard_rank(), cutoff)?;
    let z = z.iter().map(|x| rat(x)).collect::<Res<Vec<_>>>()?;
    if z.len() != s.picard_rank() {
        return Err(CliError::Input(format!("base point needs {} coordinates", s.picard_rank())));
    }
    let out = local_a_pipeline(&s, &table, &z, n, order)?;
    let report = json!({
        "picard_rank": s.picard_rank(),
        "nef_basis": s.nef_basis,
        "connection": to_value(&StructureJson::of(&out.connection.data)),
        "limit": to_value(&StructureJson::of(&out.limit)),
        "mfs": to_value(&MFSJson::of(&out.mfs)),
    });
    Ok(certified(report, &out.certificates))
}
