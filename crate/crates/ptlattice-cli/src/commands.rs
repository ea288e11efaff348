//! One table builder per subcommand.

use num_complex::Complex64;
use ptlattice::bound::{find_bound_states, pt_norm, real_root_count};
use ptlattice::exceptional::find_eps_general;
use ptlattice::pt_scattering::{current_profile, jost_pt_state};
use ptlattice::scattering::{invisibility_check, perfect_transmission, solve_scattering};
use ptlattice::spectrum::{solve_discrete_spectrum, sweep_spectrum};
use ptlattice::{ScatteringError, SpectralPoint};

use crate::config::{Command, RunConfig};
use crate::figures::figure_data;
use crate::table::{Cell, Column, Table};
use crate::CliError;

/// Sites on each side of the defect reported by `jost` and bonds by `ptcurrent`.
const PROFILE_REACH: i64 = 5;

pub fn build_table(config: &RunConfig) -> Result<Table, CliError> {
    match config.command {
        Command::Spectrum => spectrum(config),
        Command::Sweep => sweep(config),
        Command::Eps => eps(config),
        Command::Bound => bound(config),
        Command::Scatter => scatter(config),
        Command::Perfect => perfect(config),
        Command::PtNorm => ptnorm(config),
        Command::PtCurrent => ptcurrent(config),
        Command::Jost => jost(config),
        Command::Figure(which) => figure_data(which),
    }
}

fn point_columns() -> Vec<Column> {
    vec![
        Column::complex("lambda"),
        Column::complex("k"),
        Column::complex("E"),
        Column::real("sheet"),
        Column::real("class"),
    ]
}

fn point_cells(p: &SpectralPoint) -> Vec<Cell> {
    vec![
        p.lambda.into(),
        p.k.into(),
        p.energy.into(),
        p.sheet.to_string().into(),
        p.class.to_string().into(),
    ]
}

fn spectrum(config: &RunConfig) -> Result<Table, CliError> {
    let mut columns = vec![Column::real("index")];
    columns.extend(point_columns());
    let mut table = Table::new("spectrum", columns);
    for (i, p) in solve_discrete_spectrum(&config.params)?.iter().enumerate() {
        let mut row = vec![Cell::from(i)];
        row.extend(point_cells(p));
        table.push(row);
    }
    Ok(table)
}

fn sweep(config: &RunConfig) -> Result<Table, CliError> {
    let axis = config.grid.axis.to_string();
    let mut columns = vec![Column::real(&axis), Column::real("branch")];
    columns.extend(point_columns());
    let mut table = Table::new("sweep", columns);
    for row in sweep_spectrum(&config.params, config.grid.axis, &config.grid.values())? {
        let mut cells = vec![Cell::from(row.value), Cell::from(row.branch)];
        cells.extend(point_cells(&row.point));
        table.push(cells);
    }
    Ok(table)
}

fn eps(config: &RunConfig) -> Result<Table, CliError> {
    let p = &config.params;
    let grid_n = config.grid.n.max(2);
    let records = find_eps_general(p.eps0(), p.eps1(), (config.grid.min, config.grid.max), grid_n)?;
    let mut table = Table::new(
        "eps",
        vec![
            Column::real("gamma_bar"),
            Column::real("kind"),
            Column::complex("E_bar"),
            Column::complex("puiseux_coeff"),
            Column::real("branch_sign"),
            Column::real("coalescences"),
        ],
    );
    for ep in records {
        table.push(vec![
            ep.gamma_bar.into(),
            ep.kind.to_string().into(),
            ep.e_bar.into(),
            ep.puiseux_coeff.into(),
            ep.branch_sign.into(),
            ep.coalescences.len().into(),
        ]);
    }
    Ok(table)
}

fn bound(config: &RunConfig) -> Result<Table, CliError> {
    let states = find_bound_states(&config.params)?;
    let mut table = Table::new(
        "bound",
        vec![
            Column::real("kind"),
            Column::real("lambda"),
            Column::real("kappa"),
            Column::real("delta"),
            Column::real("E"),
            Column::complex("psi0"),
            Column::complex("B"),
            Column::complex("C"),
            Column::real("theta"),
        ],
    );
    let tagged = states
        .bound
        .iter()
        .map(|s| ("bound", s))
        .chain(states.virtual_states.iter().map(|s| ("virtual", s)));
    for (kind, s) in tagged {
        table.push(vec![
            kind.into(),
            s.lambda.into(),
            s.kappa.into(),
            s.delta.into(),
            s.energy.into(),
            s.psi0.into(),
            s.b_coeff.into(),
            s.c_coeff.into(),
            s.theta.into(),
        ]);
    }
    Ok(table)
}

fn ptnorm(config: &RunConfig) -> Result<Table, CliError> {
    let real_roots = real_root_count(&config.params)?;
    let mut table = Table::new(
        "ptnorm",
        vec![
            Column::real("lambda"),
            Column::real("delta"),
            Column::real("E"),
            Column::real("n_pt"),
            Column::real("c_eigenvalue"),
            Column::real("real_roots"),
            Column::real("unbroken"),
        ],
    );
    for s in find_bound_states(&config.params)?.bound {
        let norm = pt_norm(&s)?;
        table.push(vec![
            s.lambda.into(),
            s.delta.into(),
            s.energy.into(),
            norm.n_pt.into(),
            norm.c_eigenvalue.into(),
            real_roots.into(),
            (real_roots == 4).into(),
        ]);
    }
    Ok(table)
}

fn required_k(config: &RunConfig) -> Result<f64, CliError> {
    config
        .k
        .ok_or_else(|| CliError::Usage(format!("{:?} needs --k", config.command).to_lowercase()))
}

/// Row status for failures that a k grid records instead of aborting on.
fn status_of(err: &ScatteringError) -> Option<&'static str> {
    match err {
        ScatteringError::Pole { .. } => Some("pole"),
        ScatteringError::BandEdge(_) => Some("band-edge"),
        _ => None,
    }
}

/// A single wavenumber with `--k`, otherwise a k grid from `--min/--max/--n`.
fn scatter(config: &RunConfig) -> Result<Table, CliError> {
    // Grid rows record poles as NaN; a single requested k reports them as errors.
    let grid = config.k.is_none() || config.grid_requested;
    let ks = match config.k {
        Some(k) if !grid => vec![k],
        _ => config.grid.values(),
    };
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let mut table = Table::new(
        "scatter",
        vec![
            Column::real("direction"),
            Column::real("k"),
            Column::real("status"),
            Column::real("E"),
            Column::complex("t"),
            Column::complex("r"),
            Column::real("T"),
            Column::real("R"),
            Column::complex("psi0"),
        ],
    );
    for k in ks {
        let energy = -2.0 * k.cos();
        let row = match solve_scattering(&config.params, k, config.direction) {
            Ok(s) => vec![
                "ok".into(),
                energy.into(),
                s.t.into(),
                s.r.into(),
                s.transmission.into(),
                s.reflection.into(),
                s.psi0.into(),
            ],
            Err(e) => match status_of(&e) {
                Some(status) if grid => vec![
                    status.into(),
                    energy.into(),
                    nan.into(),
                    nan.into(),
                    f64::NAN.into(),
                    f64::NAN.into(),
                    nan.into(),
                ],
                _ => return Err(e.into()),
            },
        };
        let mut cells = vec![config.direction.to_string().into(), Cell::from(k)];
        cells.extend(row);
        table.push(cells);
    }
    Ok(table)
}

fn perfect(config: &RunConfig) -> Result<Table, CliError> {
    let set = perfect_transmission(&config.params, config.direction)?;
    let mut table = Table::new(
        "perfect",
        vec![
            Column::real("direction"),
            Column::real("k"),
            Column::real("gamma_independent"),
            Column::real("all_k"),
            Column::real("invisible"),
            Column::real("phase_shift"),
            Column::complex("response"),
        ],
    );
    let direction = config.direction.to_string();
    if set.all_k {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        table.push(vec![
            direction.as_str().into(),
            f64::NAN.into(),
            true.into(),
            true.into(),
            false.into(),
            f64::NAN.into(),
            nan.into(),
        ]);
        return Ok(table);
    }
    for &k in &set.ktildes {
        let fixed = set.gamma_independent.iter().any(|g| (g - k).abs() < 1e-9);
        let (invisible, phase, response) = match invisibility_check(&config.params, k, config.direction) {
            Ok(rec) => (rec.invisible, rec.phase_shift, rec.response),
            Err(_) => (false, f64::NAN, Complex64::new(f64::NAN, f64::NAN)),
        };
        table.push(vec![
            direction.as_str().into(),
            k.into(),
            fixed.into(),
            false.into(),
            invisible.into(),
            phase.into(),
            response.into(),
        ]);
    }
    Ok(table)
}

fn ptcurrent(config: &RunConfig) -> Result<Table, CliError> {
    let k = required_k(config)?;
    let wave = solve_scattering(&config.params, k, config.direction)?.wave();
    let mut table = Table::new(
        "ptcurrent",
        vec![Column::real("bond"), Column::complex("j_pt"), Column::real("j_std")],
    );
    for v in current_profile(&wave, -PROFILE_REACH..=PROFILE_REACH) {
        table.push(vec![v.bond.into(), v.j_pt.into(), v.j_std.into()]);
    }
    Ok(table)
}

fn jost(config: &RunConfig) -> Result<Table, CliError> {
    let k = required_k(config)?;
    if !config.params.is_pure_gain_loss() {
        return Err(CliError::Usage("jost is defined for eps0 = eps1 = 0".into()));
    }
    let (data, wave) = jost_pt_state(config.params.gamma(), k)?;
    let mut table = Table::new("jost", vec![Column::real("quantity"), Column::complex("value")]);
    let real = |v: f64| Complex64::new(v, 0.0);
    let named = [
        ("alpha_plus", data.alpha_plus),
        ("alpha_minus", data.alpha_minus),
        ("f0_plus", real(data.f0_plus)),
        ("f0_minus", real(data.f0_minus)),
        ("jost_plus", real(data.jost_plus)),
        ("jost_minus", real(data.jost_minus)),
        ("a_plus", real(data.a_plus)),
        ("a_minus", real(data.a_minus)),
    ];
    for (name, value) in named {
        table.push(vec![name.into(), value.into()]);
    }
    for x in -PROFILE_REACH..=PROFILE_REACH {
        table.push(vec![format!("phi({x})").into(), wave.eval(x).into()]);
    }
    Ok(table)
}
