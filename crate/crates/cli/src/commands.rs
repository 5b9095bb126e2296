//! One function per verb.

use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use fermat_torus_core::kinematics::{
    acceleration, curve_y, linspace, phase_scan, sample_curve, velocity, CurveParam,
    KinematicsError, PhaseClass,
};
use fermat_torus_core::rational::Rational;
use fermat_torus_core::search::{
    diophantine_triples, expand_multiples, line_curve_crossings, rational_points_for_denominators,
    sort_solutions, SolutionRecord,
};
use fermat_torus_core::torus::{
    density_coverage, integrate_geodesic, GeodesicState, Point3, SurfacePoint, Torus, TorusError,
    WindingLine,
};

use crate::args::{
    Command, CurveArgs, DensityArgs, Format, GeodesicArgs, IntersectArgs, KinematicsArgs,
    MapLineArgs, Output, Quantity, SearchArgs, Surface, TriplesArgs,
};
use crate::emit::{emit_csv, emit_obj, emit_svg, Axes, Cell, Series};
use crate::{CliError, THREADS_ENV};

type Result<T> = std::result::Result<T, CliError>;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn torus_error(e: TorusError) -> CliError {
    match e {
        TorusError::NumericalFailure { .. } => CliError::Numerical(e.to_string()),
        _ => usage(e),
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Curve(a) => curve(a),
        Command::Kinematics(a) => kinematics(a, out),
        Command::Geodesic(a) => geodesic(a, out),
        Command::MapLine(a) => map_line(a, out),
        Command::Density(a) => density(a),
        Command::Search(a) => search(a, out),
        Command::Triples(a) => triples(a),
        Command::Intersect(a) => intersect(a, err),
    }
}

/// Resolves the output format and checks that the verb supports it.
fn resolve_format(output: &Output, verb: &str, allowed: &[Format]) -> Result<Format> {
    let format = match output.format {
        Some(f) => f,
        None => {
            let ext = output
                .out
                .extension()
                .and_then(|e| e.to_str())
                .map(str::to_ascii_lowercase);
            match ext.as_deref() {
                Some("csv") => Format::Csv,
                Some("svg") => Format::Svg,
                Some("obj") => Format::Obj,
                _ => {
                    return Err(usage(format!(
                        "cannot infer the format of {}; pass --format",
                        output.out.display()
                    )))
                }
            }
        }
    };
    if allowed.contains(&format) {
        Ok(format)
    } else {
        let names: Vec<&str> = allowed.iter().map(|f| f.as_str()).collect();
        Err(usage(format!(
            "{verb} cannot write {}; supported: {}",
            format.as_str(),
            names.join(", ")
        )))
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be finite")))
    }
}

fn write_csv(output: &Output, header: &[&str], rows: &[Vec<Cell>]) -> Result<()> {
    emit_csv(&output.out, header, rows).map_err(io_error(&output.out))
}

fn write_svg(output: &Output, series: &[Series], axes: Axes, title: &str) -> Result<()> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(usage("nothing to plot"));
    }
    emit_svg(&output.out, series, axes, title).map_err(io_error(&output.out))
}

fn write_obj(output: &Output, pieces: &[Vec<Point3>]) -> Result<()> {
    if pieces.iter().map(Vec::len).sum::<usize>() < 2 {
        return Err(usage("an obj polyline needs at least two points"));
    }
    emit_obj(&output.out, pieces).map_err(io_error(&output.out))
}

fn label_n(n: f64) -> String {
    format!("n={n}")
}

/// Worker count from the environment, else the machine's parallelism.
pub fn thread_count() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(usage(format!(
                "{THREADS_ENV} must be a positive integer, got {s:?}"
            ))),
        },
        Err(std::env::VarError::NotPresent) => {
            Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
        }
        Err(e) => Err(usage(format!("{THREADS_ENV}: {e}"))),
    }
}

/// Applies `f` to every job on up to `threads` workers; results keep the
/// job order.
fn parallel_map<J, R, F>(jobs: &[J], threads: usize, f: F) -> Vec<R>
where
    J: Sync,
    R: Send,
    F: Fn(&J) -> R + Sync,
{
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads.min(jobs.len()).max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let r = f(job);
                slots.lock().expect("worker panicked")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("worker panicked")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

fn curve(a: CurveArgs) -> Result<()> {
    let format = resolve_format(&a.output, "curve", &[Format::Csv, Format::Svg])?;
    if a.n.is_empty() {
        return Err(usage("--n needs at least one exponent"));
    }
    let mut series = Vec::with_capacity(a.n.len());
    for &n in &a.n {
        series.push(Series {
            label: label_n(n),
            points: sample_curve(n, a.samples).map_err(usage)?,
        });
    }
    match format {
        Format::Csv => {
            let rows: Vec<Vec<Cell>> =
                a.n.iter()
                    .zip(&series)
                    .flat_map(|(&n, s)| {
                        s.points
                            .iter()
                            .map(move |&(x, y)| vec![x.into(), n.into(), y.into()])
                    })
                    .collect();
            write_csv(&a.output, &["x", "n", "y"], &rows)
        }
        _ => {
            let axes = Axes {
                x: (0.0, 1.0),
                y: (0.0, 1.0),
            };
            write_svg(&a.output, &series, axes, "x^n + y^n = 1")
        }
    }
}

/// Value of the plotted quantity; divergent or singular points map to -inf.
fn plotted(q: Quantity, x: f64, n: f64) -> std::result::Result<f64, KinematicsError> {
    let r = match q {
        Quantity::Y => curve_y(x, n),
        Quantity::Vel => velocity(x, n),
        Quantity::Acc => acceleration(x, n),
    };
    match r {
        Err(KinematicsError::Divergence { .. } | KinematicsError::Singularity) => {
            Ok(f64::NEG_INFINITY)
        }
        other => other,
    }
}

fn kinematics(a: KinematicsArgs, out: &mut dyn Write) -> Result<()> {
    let format = resolve_format(&a.output, "kinematics", &[Format::Csv, Format::Svg])?;
    let x_min = finite("x-min", a.x_min)?;
    let x_max = finite("x-max", a.x_max)?;
    if a.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    if x_min >= x_max {
        return Err(usage("--x-min must be below --x-max"));
    }
    for &n in &a.n {
        CurveParam::for_kinematics(n).map_err(usage)?;
    }
    let grid = linspace(x_min, x_max, a.samples);
    let classes: Vec<(f64, PhaseClass)> = match format {
        Format::Csv => {
            let scan = phase_scan(&a.n, &grid).map_err(usage)?;
            let rows: Vec<Vec<Cell>> = scan
                .samples
                .iter()
                .map(|s| {
                    vec![
                        s.x.into(),
                        s.n.into(),
                        s.y.into(),
                        s.vel.into(),
                        s.acc.into(),
                    ]
                })
                .collect();
            write_csv(&a.output, &["x", "n", "y", "vel", "acc"], &rows)?;
            scan.classes
        }
        _ => {
            if !(0.0..=1.0).contains(&x_min) || !(0.0..=1.0).contains(&x_max) {
                return Err(usage("x range must lie within [0, 1]"));
            }
            let mut series = Vec::with_capacity(a.n.len());
            for &n in &a.n {
                let points = grid
                    .iter()
                    .map(|&x| plotted(a.quantity, x, n).map(|v| (x, v)))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(usage)?;
                series.push(Series {
                    label: label_n(n),
                    points,
                });
            }
            let fitted = Axes::fit(&series);
            let y = (a.y_min.unwrap_or(fitted.y.0), a.y_max.unwrap_or(fitted.y.1));
            if !(y.0.is_finite() && y.1.is_finite() && y.0 < y.1) {
                return Err(usage("--y-min must be below --y-max"));
            }
            let title = match a.quantity {
                Quantity::Y => "y(x)",
                Quantity::Vel => "velocity dy/dx",
                Quantity::Acc => "acceleration d2y/dx2",
            };
            write_svg(
                &a.output,
                &series,
                Axes {
                    x: (x_min, x_max),
                    y,
                },
                title,
            )?;
            a.n.iter().map(|&n| (n, PhaseClass::classify(n))).collect()
        }
    };
    for (n, class) in classes {
        let _ = writeln!(out, "n={n} {class}");
    }
    Ok(())
}

fn geodesic(a: GeodesicArgs, out: &mut dyn Write) -> Result<()> {
    let format = resolve_format(&a.output, "geodesic", &[Format::Csv, Format::Obj])?;
    if a.every == 0 {
        return Err(usage("--every must be at least 1"));
    }
    let torus = Torus::new(a.major, a.minor).map_err(torus_error)?;
    for (name, v) in [("u0", a.u0), ("v0", a.v0), ("du", a.du), ("dv", a.dv)] {
        finite(name, v)?;
    }
    let s0 = GeodesicState::new(a.u0, a.v0, a.du, a.dv);
    let traj = integrate_geodesic(&torus, s0, a.t_max, a.step).map_err(torus_error)?;
    let last = traj.samples.len() - 1;
    let kept = traj
        .samples
        .iter()
        .enumerate()
        .filter(|(i, _)| i % a.every == 0 || *i == last)
        .map(|(_, s)| s);
    match format {
        Format::Csv => {
            let rows: Vec<Vec<Cell>> = kept
                .map(|s| {
                    let st = s.state;
                    let p = s.point;
                    [s.t, st.u, st.v, st.du, st.dv, p.x, p.y, p.z, s.k, s.energy]
                        .into_iter()
                        .map(Cell::Real)
                        .collect()
                })
                .collect();
            write_csv(
                &a.output,
                &["t", "u", "v", "du", "dv", "x", "y", "z", "k", "energy"],
                &rows,
            )?;
        }
        _ => write_obj(&a.output, &[kept.map(|s| s.point).collect()])?,
    }
    let _ = writeln!(
        out,
        "k_drift={:e} energy_drift={:e}",
        traj.k_drift, traj.energy_drift
    );
    Ok(())
}

/// Integers and `p/q` are exact; anything with a decimal point or exponent
/// is a floating-point slope.
fn parse_slope(name: &str, s: &str) -> Result<(f64, Option<Rational>)> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) || s.contains("inf") || s.contains("nan") {
        let v: f64 = s
            .parse()
            .map_err(|_| usage(format!("--{name}: cannot parse {s:?}")))?;
        Ok((finite(name, v)?, None))
    } else {
        let r: Rational = s.parse().map_err(|e| usage(format!("--{name}: {e}")))?;
        Ok((r.to_f64(), Some(r)))
    }
}

fn winding_line(a: &str, b: &str, u0: f64, v0: f64) -> Result<WindingLine> {
    let (fa, ra) = parse_slope("a", a)?;
    let (fb, rb) = parse_slope("b", b)?;
    finite("u0", u0)?;
    finite("v0", v0)?;
    match (ra, rb) {
        (Some(ra), Some(rb)) => WindingLine::from_rational(ra, rb, u0, v0),
        _ => WindingLine::new(fa, fb, u0, v0),
    }
    .map_err(torus_error)
}

/// Splits a sampled path wherever consecutive points lie on opposite sides
/// of an identified edge.
fn split_at_wraps<T: Copy>(
    pts: &[(SurfacePoint, T)],
    wraps: impl Fn(SurfacePoint, SurfacePoint) -> bool,
) -> Vec<Vec<T>> {
    let mut pieces: Vec<Vec<T>> = Vec::new();
    let mut prev: Option<SurfacePoint> = None;
    for &(p, item) in pts {
        match (prev, pieces.last_mut()) {
            (Some(q), Some(piece)) if !wraps(q, p) => piece.push(item),
            _ => pieces.push(vec![item]),
        }
        prev = Some(p);
    }
    pieces
}

fn jumps(a: f64, b: f64) -> bool {
    (a - b).abs() > std::f64::consts::PI
}

fn map_line(a: MapLineArgs, out: &mut dyn Write) -> Result<()> {
    let format = resolve_format(
        &a.output,
        "map-line",
        &[Format::Csv, Format::Svg, Format::Obj],
    )?;
    let torus = Torus::new(a.major, a.minor).map_err(torus_error)?;
    let line = winding_line(&a.a, &a.b, a.u0, a.v0)?;
    if a.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let closure = line.closure_period();
    let t_max = match (a.t_max, &closure) {
        (Some(t), _) => {
            if !(t > 0.0 && t.is_finite()) {
                return Err(usage("--t-max must be positive and finite"));
            }
            t
        }
        (None, Some(c)) => c.period,
        (None, None) => return Err(usage("the line does not close; pass --t-max")),
    };
    match &closure {
        Some(c) => {
            let turns = c
                .turns
                .as_ref()
                .map_or(String::new(), |t| format!(" turns={t}"));
            let kind = if c.heuristic {
                " (inferred from floating-point slopes)"
            } else {
                ""
            };
            let _ = writeln!(out, "closed period={:e}{turns}{kind}", c.period);
        }
        None => {
            let _ = writeln!(out, "open (no closure found)");
        }
    }
    let embed = |p: SurfacePoint| match a.surface {
        Surface::Torus => torus.embed(p),
        Surface::Cylinder => torus.embed_cylinder(p),
    };
    let ts = linspace(0.0, t_max, a.samples);
    let pts: Vec<(f64, SurfacePoint)> = ts.iter().map(|&t| (t, line.point(t))).collect();
    match format {
        Format::Csv => {
            let rows: Vec<Vec<Cell>> = pts
                .iter()
                .map(|&(t, p)| {
                    let e = embed(p);
                    [t, p.u, p.v, e.x, e.y, e.z]
                        .into_iter()
                        .map(Cell::Real)
                        .collect()
                })
                .collect();
            write_csv(&a.output, &["t", "u", "v", "x", "y", "z"], &rows)
        }
        Format::Svg => {
            let flat: Vec<(SurfacePoint, (f64, f64))> =
                pts.iter().map(|&(_, p)| (p, p.to_unit_square())).collect();
            let pieces = split_at_wraps(&flat, |p, q| jumps(p.u, q.u) || jumps(p.v, q.v));
            let series: Vec<Series> = pieces
                .into_iter()
                .enumerate()
                .map(|(i, points)| Series {
                    label: format!("branch {i}"),
                    points,
                })
                .collect();
            let axes = Axes {
                x: (0.0, 1.0),
                y: (0.0, 1.0),
            };
            write_svg(
                &a.output,
                &series,
                axes,
                &format!("line a={} b={} on the flat torus", a.a, a.b),
            )
        }
        Format::Obj => {
            let spatial: Vec<(SurfacePoint, Point3)> =
                pts.iter().map(|&(_, p)| (p, embed(p))).collect();
            let pieces = match a.surface {
                Surface::Torus => vec![spatial.iter().map(|&(_, e)| e).collect()],
                // Rolling only identifies the v edges; crossing u = 2π jumps.
                Surface::Cylinder => split_at_wraps(&spatial, |p, q| jumps(p.u, q.u)),
            };
            write_obj(&a.output, &pieces)
        }
    }
}

fn density(a: DensityArgs) -> Result<()> {
    resolve_format(&a.output, "density", &[Format::Csv])?;
    let line = winding_line(&a.a, &a.b, 0.0, 0.0)?;
    for &t in &a.t_max {
        if !(t > 0.0 && t.is_finite()) {
            return Err(usage("--t-max values must be positive and finite"));
        }
    }
    if a.grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    let threads = thread_count()?;
    let coverage = parallel_map(&a.t_max, threads, |&t| density_coverage(&line, t, a.grid));
    let mut rows = Vec::with_capacity(a.t_max.len());
    for (&t, c) in a.t_max.iter().zip(coverage) {
        rows.push(vec![Cell::Real(t), Cell::Real(c.map_err(torus_error)?)]);
    }
    write_csv(&a.output, &["t_max", "coverage"], &rows)
}

fn int(v: &impl ToString) -> Cell {
    Cell::Int(v.to_string())
}

/// Contiguous denominator ranges of roughly equal work (the work for
/// denominator `q` grows linearly in `q`).
fn denominator_chunks(max_den: u64, chunks: u64) -> Vec<std::ops::RangeInclusive<u64>> {
    let mut out = Vec::new();
    let mut lo = 1;
    for k in 1..=chunks {
        let hi = if k == chunks {
            max_den
        } else {
            ((max_den as f64) * (k as f64 / chunks as f64).sqrt()) as u64
        };
        if hi >= lo {
            out.push(lo..=hi);
            lo = hi + 1;
        }
    }
    out
}

/// Rational points with denominators up to `max_den`, searched on `threads`
/// workers. The result does not depend on `threads`.
pub fn parallel_search(n: u32, max_den: u64, threads: usize) -> Result<Vec<SolutionRecord>> {
    let chunks = denominator_chunks(max_den, (threads as u64 * 8).min(max_den.max(1)));
    let parts = parallel_map(&chunks, threads, |r| {
        rational_points_for_denominators(n, r.clone())
    });
    let mut all = Vec::new();
    for p in parts {
        all.extend(p.map_err(usage)?);
    }
    sort_solutions(&mut all);
    Ok(all)
}

fn search(a: SearchArgs, out: &mut dyn Write) -> Result<()> {
    resolve_format(&a.output, "search", &[Format::Csv])?;
    if a.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    if a.max_den == 0 {
        return Err(usage("--max-den must be at least 1"));
    }
    let sols = parallel_search(a.n, a.max_den, thread_count()?)?;
    let rows: Vec<Vec<Cell>> = sols
        .iter()
        .map(|s| {
            vec![
                int(s.x.numer()),
                int(s.x.denom()),
                int(s.y.numer()),
                int(s.y.denom()),
                int(&s.n),
            ]
        })
        .collect();
    write_csv(&a.output, &["x_num", "x_den", "y_num", "y_den", "n"], &rows)?;
    let _ = writeln!(
        out,
        "{} solution(s) with n={} and denominators <= {}",
        sols.len(),
        a.n,
        a.max_den
    );
    Ok(())
}

fn triples(a: TriplesArgs) -> Result<()> {
    resolve_format(&a.output, "triples", &[Format::Csv])?;
    let mut found = diophantine_triples(a.n, a.max_z).map_err(usage)?;
    if a.expand_multiples {
        found = expand_multiples(&found, a.max_z);
    }
    let rows: Vec<Vec<Cell>> = found
        .iter()
        .map(|t| vec![int(&t.x), int(&t.y), int(&t.z)])
        .collect();
    write_csv(&a.output, &["x", "y", "z"], &rows)
}

fn intersect(a: IntersectArgs, err: &mut dyn Write) -> Result<()> {
    resolve_format(&a.output, "intersect", &[Format::Csv])?;
    let slope = |name: &str, s: &str| -> Result<Rational> {
        s.parse().map_err(|e| usage(format!("--{name}: {e}")))
    };
    let (ra, rb) = (slope("a", &a.a)?, slope("b", &a.b)?);
    if a.max_den == 0 {
        return Err(usage("--max-den must be at least 1"));
    }
    let res = line_curve_crossings(a.n, &ra, &rb, a.max_den, a.tol).map_err(usage)?;
    let rows: Vec<Vec<Cell>> = res
        .crossings
        .iter()
        .map(|c| {
            let mut row = vec![Cell::Real(c.x), Cell::Real(c.y)];
            match &c.rational_label {
                Some((x, y)) => row.extend([
                    Cell::Int("1".into()),
                    int(x.numer()),
                    int(x.denom()),
                    int(y.numer()),
                    int(y.denom()),
                ]),
                None => row.extend([
                    Cell::Int("0".into()),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                ]),
            }
            row
        })
        .collect();
    write_csv(
        &a.output,
        &["x", "y", "rational", "x_num", "x_den", "y_num", "y_den"],
        &rows,
    )?;
    for f in &res.failures {
        let _ = writeln!(err, "branch {}: {}", f.branch, f.reason);
    }
    if res.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "{} branch(es) failed to bracket a crossing",
            res.failures.len()
        )))
    }
}
