use crate::args::*;
use crate::error::{CliError, CliResult};
use boussinesq::direct::ReflectionSource;
use boussinesq::direct::{
    default_search_regions, estimate_t_with_floor, evolve_scattering, scatter, ContourResolution,
    Pole, ScatteringData, SolverConfig,
};
use boussinesq::io::{ingest_initial_data, to_json, GridFile};
use boussinesq::jump::{build_circle_jump, build_v, BoxPotential, CircleSystem};
use boussinesq::soliton::{breather, n_soliton, one_soliton, residue_for_shift, PoleSpec};
use boussinesq::spectral::{classify, dist_to_qhat, Segment};
use boussinesq::verify::{
    lax_compatibility, mass_conservation, pde_residual, round_trip, system_residual, MassReport,
    ResidualReport, RoundTripOptions,
};
use boussinesq::{Error, InitialData, SolitonSpec, SolutionField, C64, M3};
use serde::Serialize;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Writes `text` to `path`, or to standard output.
fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Config(format!("standard output: {e}"))),
    }
}

fn emit_field(field: &SolutionField, out: &FieldOut, provenance: &str) -> CliResult<()> {
    let file = if out.emit_initial {
        let v = field.v_row(0).expect("constructors provide v");
        let data = InitialData::new(
            field.grid.x_min,
            field.grid.hx,
            field.u_row(0).to_vec(),
            v.to_vec(),
        )?;
        GridFile::from_initial_data(&data).with_meta("t", field.grid.t_min)
    } else {
        GridFile::from_field(field)
    };
    emit(
        out.output.as_deref(),
        &file.with_meta("command", provenance).to_string()?,
    )
}

/// Rejects poles outside the admissible region as configuration errors.
fn check_poles(spec: &SolitonSpec) -> CliResult<()> {
    match spec.classify() {
        Err(e @ Error::Domain { .. }) => Err(CliError::Config(e.to_string())),
        Err(e) => Err(e.into()),
        Ok(_) => Ok(()),
    }
}

pub fn soliton(a: &SolitonArgs, prov: &str) -> CliResult<()> {
    check_poles(&SolitonSpec::single(C64::from(a.k0), C64::new(0.0, 0.0)))?;
    let c = match a.c {
        Some(c) => c,
        None => residue_for_shift(a.k0, a.x0.unwrap_or(0.0))?,
    };
    emit_field(&one_soliton(a.k0, c, a.out.grid)?, &a.out, prov)
}

pub fn breather_cmd(a: &BreatherArgs, prov: &str) -> CliResult<()> {
    check_poles(&SolitonSpec::single(a.k0, a.c))?;
    emit_field(&breather(a.k0, a.c, a.out.grid)?, &a.out, prov)
}

fn spec_of(poles: &[(C64, C64)]) -> SolitonSpec {
    SolitonSpec::new(poles.iter().map(|&(k0, c)| PoleSpec { k0, c }).collect())
}

pub fn nsoliton(a: &NsolitonArgs, prov: &str) -> CliResult<()> {
    let spec = spec_of(&a.poles);
    check_poles(&spec)?;
    if !a.allow_singular && !spec.is_regular()? {
        return Err(CliError::Validation(
            "the pole configuration contains singular poles (pass --allow-singular to sample anyway)".into(),
        ));
    }
    emit_field(&n_soliton(&spec, a.out.grid)?, &a.out, prov)
}

#[derive(Serialize)]
struct PoleOut {
    k0: C64,
    c: C64,
    d: Option<C64>,
}

#[derive(Serialize)]
struct ScatterSummary {
    t: f64,
    poles: Vec<PoleOut>,
    /// `None` when the estimate is infinite.
    existence_time_estimate: Option<f64>,
    ray_floor_r1: f64,
    r1_samples: usize,
    r2_samples: usize,
    command: String,
}

fn scatter_data(o: &ScatterOpts) -> CliResult<ScatteringData> {
    let data = ingest_initial_data(&o.data)?;
    let res = ContourResolution {
        per_decade: o.per_decade,
        arc_nodes: o.arc_nodes,
        ..ContourResolution::default()
    };
    if o.per_decade == 0 || o.arc_nodes < 2 {
        return Err(CliError::Config(
            "need per-decade ≥ 1 and arc-nodes ≥ 2".into(),
        ));
    }
    let cfg = if o.compact {
        SolverConfig::compact()
    } else {
        SolverConfig::default()
    };
    let regions = match (o.no_poles, o.search.is_empty()) {
        (true, _) => Vec::new(),
        (false, true) => default_search_regions(),
        (false, false) => o.search.clone(),
    };
    Ok(scatter(&data, &res, &regions, &Default::default(), &cfg)?)
}

fn write_scattering(sd: &ScatteringData, o: &ScatterOpts, prov: &str) -> CliResult<()> {
    let dir = o.out_dir.as_path();
    fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
    for (name, f) in [("r1", &sd.r1), ("r2", &sd.r2)] {
        GridFile::from_sampled(f, name)
            .with_meta("t", sd.t)
            .with_meta("command", prov)
            .write(&dir.join(format!("{name}.csv")))?;
    }
    let t_hat = estimate_t_with_floor(sd, o.t_floor);
    let summary = ScatterSummary {
        t: sd.t,
        poles: sd
            .poles
            .iter()
            .map(|p| PoleOut {
                k0: p.k0,
                c: p.c,
                d: p.d(),
            })
            .collect(),
        existence_time_estimate: t_hat.is_finite().then_some(t_hat),
        ray_floor_r1: sd.ray_floor_r1(),
        r1_samples: sd.r1.len(),
        r2_samples: sd.r2.len(),
        command: prov.to_string(),
    };
    let path = dir.join("scattering.json");
    fs::write(&path, to_json(&summary)?)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn scatter_cmd(a: &ScatterArgs, prov: &str) -> CliResult<()> {
    write_scattering(&scatter_data(&a.opts)?, &a.opts, prov)
}

pub fn evolve(a: &EvolveArgs, prov: &str) -> CliResult<()> {
    let sd = scatter_data(&a.opts)?;
    write_scattering(&evolve_scattering(&sd, a.t)?, &a.opts, prov)
}

pub fn roundtrip(a: &RoundtripArgs) -> CliResult<()> {
    check_poles(&SolitonSpec::single(a.k0, C64::new(0.0, 0.0)))?;
    let c = match (a.c, a.x0, a.k0.im == 0.0) {
        (Some(c), _, _) => c,
        (None, x0, true) => residue_for_shift(a.k0.re, x0.unwrap_or(0.0))?,
        (None, None, false) => C64::new(1.0, 0.0),
        (None, Some(_), false) => {
            return Err(CliError::Config("--x0 applies to real poles only".into()))
        }
    };
    let spec = SolitonSpec::single(a.k0, c);
    check_poles(&spec)?;
    if !spec.is_regular()? {
        return Err(CliError::Validation(format!(
            "pole {} with c = {c} is singular",
            a.k0
        )));
    }
    let opts = RoundTripOptions {
        lx: a.lx,
        hx: a.hx,
        k_tol: a.k_tol,
        c_tol: a.c_tol,
        floor_tol: a.floor_tol,
        ray_per_decade: a.per_decade,
        ..RoundTripOptions::default()
    };
    let report = round_trip(&spec, &opts)?;
    emit(a.output.as_deref(), &to_json(&report)?)?;
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Validation("round trip outside tolerance".into()))
    }
}

#[derive(Serialize)]
struct VerifyReport {
    pde: Option<ResidualReport>,
    system: Option<[ResidualReport; 2]>,
    lax: Option<f64>,
    mass: Option<MassReport>,
    tol: f64,
    mass_tol: f64,
    pass: bool,
}

pub fn verify(a: &VerifyArgs) -> CliResult<()> {
    let field = GridFile::read(&a.field)?.to_field()?;
    let (nt, has_v) = (field.grid.nt, field.v.is_some());
    let checks = if a.checks.is_empty() {
        let mut c = vec![Check::Mass];
        if nt >= 5 {
            c.push(Check::Pde);
        }
        if nt >= 3 && has_v {
            c.extend([Check::System, Check::Lax]);
        }
        c
    } else {
        a.checks.clone()
    };
    let ks = if a.lax_k.is_empty() {
        vec![
            C64::new(2.0, 0.5),
            C64::from_polar(0.7, 2.0),
            C64::new(-3.0, 1.0),
        ]
    } else {
        a.lax_k.clone()
    };
    let mut rep = VerifyReport {
        pde: None,
        system: None,
        lax: None,
        mass: None,
        tol: a.tol,
        mass_tol: a.mass_tol,
        pass: true,
    };
    if checks.contains(&Check::Pde) {
        let r = pde_residual(&field)?;
        rep.pass &= r.max_abs_residual < a.tol;
        rep.pde = Some(r);
    }
    if checks.contains(&Check::System) {
        let (p, q) = system_residual(&field)?;
        rep.pass &= p.max_abs_residual < a.tol && q.max_abs_residual < a.tol;
        rep.system = Some([p, q]);
    }
    if checks.contains(&Check::Lax) {
        let r = lax_compatibility(&field, &ks)?;
        rep.pass &= r < a.tol;
        rep.lax = Some(r);
    }
    if checks.contains(&Check::Mass) {
        let m = mass_conservation(&field)?;
        rep.pass &= m.decaying && m.max_deviation < a.mass_tol;
        rep.mass = Some(m);
    }
    emit(a.output.as_deref(), &to_json(&rep)?)?;
    if rep.pass {
        Ok(())
    } else {
        Err(CliError::Validation(
            "field fails the requested checks".into(),
        ))
    }
}

/// Ray angles in degrees and the segments of their inner and outer parts.
const RAYS: [(f64, Segment, Segment); 6] = [
    (30.0, Segment::G6, Segment::G3),
    (90.0, Segment::G1, Segment::G4),
    (150.0, Segment::G2, Segment::G5),
    (210.0, Segment::G3, Segment::G6),
    (270.0, Segment::G4, Segment::G1),
    (330.0, Segment::G5, Segment::G2),
];
/// Arc segments centred at `nπ/3`.
const ARCS: [Segment; 6] = [
    Segment::G8,
    Segment::G9,
    Segment::G7,
    Segment::G8,
    Segment::G9,
    Segment::G7,
];

/// Sample points `(segment, k)` on every piece of the contour.
fn contour_points(n: usize) -> Vec<(Segment, C64)> {
    let mut pts = Vec::new();
    for (deg, inner, outer) in RAYS {
        let dir = C64::from_polar(1.0, deg.to_radians());
        for m in 0..n {
            let s = (m as f64 + 0.5) / n as f64;
            pts.push((inner, dir * 10f64.powf(-2.0 * (1.0 - s))));
            pts.push((outer, dir * 10f64.powf(2.0 * s)));
        }
    }
    for (b, seg) in ARCS.iter().enumerate() {
        for m in 0..n {
            let phi = (b as f64 - 0.5 + (m as f64 + 0.5) / n as f64) * PI / 3.0;
            pts.push((*seg, C64::from_polar(1.0, phi)));
        }
    }
    pts
}

fn matrix_row(seg: f64, circle: f64, k: C64, v: &M3) -> Vec<f64> {
    let mut row = vec![seg, circle, k.re, k.im, (v.determinant() - 1.0).norm()];
    for i in 0..3 {
        for j in 0..3 {
            row.extend([v[(i, j)].re, v[(i, j)].im]);
        }
    }
    row
}

fn skippable(e: &Error) -> bool {
    matches!(e, Error::NearR2Pole { .. } | Error::ZeroOnContour { .. })
}

pub fn jumps(a: &JumpsArgs, prov: &str) -> CliResult<()> {
    if a.samples == 0 {
        return Err(CliError::Config("--samples must be positive".into()));
    }
    let boxed;
    let scattered;
    let src: &dyn ReflectionSource = match &a.data {
        Some(path) => {
            let data = ingest_initial_data(path)?;
            scattered = scatter(
                &data,
                &ContourResolution::default(),
                &[],
                &Default::default(),
                &SolverConfig::default(),
            )?;
            &scattered
        }
        None => {
            let (lo, hi, h) = a.box_data;
            boxed = BoxPotential::new(lo, hi, h)?;
            &boxed
        }
    };
    let mut cols = vec!["segment", "circle", "k_re", "k_im", "det_dev"];
    let names: Vec<String> = (1..=3)
        .flat_map(|i| (1..=3).flat_map(move |j| [format!("v{i}{j}_re"), format!("v{i}{j}_im")]))
        .collect();
    cols.extend(names.iter().map(String::as_str));
    let mut file = GridFile::new(&cols)
        .with_meta("kind", "jumps")
        .with_meta("x", a.x)
        .with_meta("t", a.t)
        .with_meta("command", prov)
        .with_meta(
            "circle",
            "-1 on the contour, else index of the pole circle (segment 0)",
        );
    let mut skipped = 0usize;
    for (seg, k) in contour_points(a.samples) {
        if dist_to_qhat(k) < 1e-6 {
            skipped += 1;
            continue;
        }
        match build_v(src, a.x, a.t, k, seg) {
            Ok(v) => file.push(matrix_row(seg.index() as f64, -1.0, k, &v)),
            Err(e) if skippable(&e) => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }
    if !a.poles.is_empty() {
        let poles: Vec<Pole> = a.poles.iter().map(|&(k0, c)| Pole { k0, c }).collect();
        let sys = CircleSystem::new(&poles)?;
        file.header
            .insert("epsilon".into(), format!("{:.16e}", sys.epsilon));
        for (m, circle) in sys.circles.iter().enumerate() {
            for j in 0..a.samples {
                let k = circle.point(2.0 * PI * j as f64 / a.samples as f64);
                let v = build_circle_jump(&poles, circle, a.x, a.t, k)?;
                file.push(matrix_row(0.0, m as f64, k, &v));
            }
        }
    }
    file.header.insert("skipped".into(), skipped.to_string());
    if let Some(path) = &a.regions {
        region_map(a.region_grid, prov).write(path)?;
    }
    emit(a.output.as_deref(), &file.to_string()?)
}

/// Sector (0 on the contour) and soliton subregion (0 outside the soliton sector) on a square grid.
fn region_map((l, n): (f64, usize), prov: &str) -> GridFile {
    let mut f = GridFile::new(&["k_re", "k_im", "sector", "subregion"])
        .with_meta("kind", "regions")
        .with_meta("command", prov)
        .with_meta(
            "subregion",
            "1 RegR, 2 RegL, 3 SingR, 4 SingL, 5 RealRight, 6 RealLeft",
        );
    let h = 2.0 * l / (n - 1) as f64;
    for j in 0..n {
        for i in 0..n {
            let k = C64::new(-l + i as f64 * h, -l + j as f64 * h);
            let p = classify(k);
            let sector = p.sector.map_or(0, |s| s.index());
            let sub = p.subregion.map_or(0, |s| s as usize + 1);
            f.push(vec![k.re, k.im, sector as f64, sub as f64]);
        }
    }
    f
}
