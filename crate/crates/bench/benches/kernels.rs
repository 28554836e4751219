use boussinesq::direct::{s11, SolverConfig};
use boussinesq::jump::{build_v, BoxPotential};
use boussinesq::soliton::{n_soliton, residue_for_shift, PoleSpec};
use boussinesq::spectral::{omega_pow, segment_of};
use boussinesq::{Grid, InitialData, SolitonSpec, C64};
use criterion::{black_box, criterion_group, criterion_main, Criterion};
use std::f64::consts::PI;

fn volterra(c: &mut Criterion) {
    let data = InitialData::gaussian();
    let cfg = SolverConfig::default();
    let k = C64::from_polar(1.0, 0.4);
    c.bench_function("volterra/s11_gaussian", |b| {
        b.iter(|| s11(&data, black_box(k), &cfg).unwrap())
    });
}

fn synthesis(c: &mut Criterion) {
    let spec = SolitonSpec::new(vec![
        PoleSpec {
            k0: C64::from(2.0),
            c: residue_for_shift(2.0, -4.0).unwrap(),
        },
        PoleSpec {
            k0: C64::from_polar(2.0, PI / 12.0),
            c: C64::new(0.3, -0.8),
        },
    ]);
    let grid = Grid::new((-20.0, 20.0, 2001), (0.0, 0.0, 1)).unwrap();
    c.bench_function("nsoliton/two_poles_2001", |b| {
        b.iter(|| n_soliton(black_box(&spec), grid).unwrap())
    });
}

fn jumps(c: &mut Criterion) {
    let src = BoxPotential::new(-0.5, 0.5, 0.3).unwrap();
    let points: Vec<C64> = [
        C64::new(0.0, 0.5),
        C64::from_polar(1.0, 0.3),
        omega_pow(1) * 0.7,
    ]
    .into_iter()
    .chain((0..6).map(|n| C64::from_polar(1.0, n as f64 * PI / 3.0 + 0.2)))
    .collect();
    let segs: Vec<_> = points
        .iter()
        .filter_map(|&k| Some((k, segment_of(k, 1e-9)?)))
        .collect();
    c.bench_function("jump/build_v_box", |b| {
        b.iter(|| {
            for &(k, s) in &segs {
                black_box(build_v(&src, 0.3, 0.2, k, s).unwrap());
            }
        })
    });
}

criterion_group!(benches, volterra, synthesis, jumps);
criterion_main!(benches);
