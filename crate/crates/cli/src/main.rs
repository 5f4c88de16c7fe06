use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use geodiscord::channels::{Channel, ChannelKind};
use geodiscord::dynamics::{
    canonicalize_axes, freezing_interval, frozen_initial_is_separable, phase_flip_trajectory, sudden_change_point,
};
use geodiscord::geometry::{connected_components, contour_slice, iso_surface, ScalarField};
use geodiscord::io::{parse_state, write_contour_csv, write_obj, Json, State};
use geodiscord::measures::{
    classical_correlation_belldiag, concurrence_wootters, concurrence_xstate, geometric_discord_belldiag,
    geometric_discord_general, mutual_information, mutual_information_belldiag, quantum_discord_belldiag,
    quantum_discord_oracle, MeasurementGrid,
};
use geodiscord::sampling::verify_hierarchy;
use geodiscord::Error;

#[derive(Parser)]
#[command(name = "geodiscord", version, about = "Quantum and geometric discord of two-qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discord, geometric discord, concurrence, mutual information and classical correlation.
    Measures { state: PathBuf },
    /// Apply a local channel to both qubits.
    Evolve {
        state: PathBuf,
        #[arg(long)]
        channel: String,
        #[arg(long)]
        p: f64,
        /// Read --p as Γt and use p = 1 − exp(−Γt).
        #[arg(long)]
        gamma_time: bool,
    },
    /// Phase-flip trajectory of a Bell-diagonal state as CSV.
    Trajectory {
        state: PathBuf,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Level surface of a discord field as an OBJ mesh.
    Isosurface {
        #[arg(long, value_enum)]
        field: FieldArg,
        #[arg(long)]
        level: f64,
        #[arg(long, default_value_t = 101)]
        res: usize,
        /// Drop cells entirely outside the physical region.
        #[arg(long)]
        clip: bool,
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Level lines of a discord field on a plane c3 = const as CSV.
    Contour {
        #[arg(long, value_enum, default_value_t = FieldArg::Dg)]
        field: FieldArg,
        #[arg(long)]
        level: f64,
        #[arg(long)]
        plane_c3: f64,
        #[arg(long, default_value_t = 201)]
        res: usize,
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Freezing interval and separability of a Bell-diagonal state under phase flip.
    Freeze { state: PathBuf },
    /// Monte-Carlo check of 2·D_G ≥ D².
    VerifyHierarchy {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        n_belldiag: usize,
        #[arg(long, default_value_t = 1000)]
        n_general: usize,
        #[arg(long, default_value_t = 128)]
        theta_steps: usize,
        #[arg(long, default_value_t = 256)]
        phi_steps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Dg,
    D,
    DgDeformed,
}

impl FieldArg {
    fn field(self, r: f64, s: f64) -> ScalarField {
        match self {
            FieldArg::Dg => ScalarField::GeometricDiscord,
            FieldArg::D => ScalarField::Discord,
            FieldArg::DgDeformed => ScalarField::GeometricDiscordDeformed { r, s },
        }
    }
}

enum Failure {
    Input(String),
    NonPhysical(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPhysical { .. } => Failure::NonPhysical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (code, message) = match failure {
                Failure::Input(m) => (2, m),
                Failure::NonPhysical(m) => (3, m),
                Failure::Violation(m) => (4, m),
            };
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Measures { state } => measures(&read_state(&state)?),
        Command::Evolve { state, channel, p, gamma_time } => evolve(&read_state(&state)?, &channel, p, gamma_time),
        Command::Trajectory { state, steps, out } => {
            let bd = require_bell_diag(&read_state(&state)?)?;
            let trajectory = phase_flip_trajectory(&bd, steps)?;
            let mut w = create(&out)?;
            trajectory.write_csv(&mut w)?;
            w.flush()?;
            print(Json::object().with("samples", trajectory.samples().len()).with("out", out.display().to_string()))
        }
        Command::Isosurface { field, level, res, clip, r, s, out } => {
            let mesh = iso_surface(&field.field(r, s), level, res, clip)?;
            let mut w = create(&out)?;
            write_obj(&mesh, &mut w)?;
            w.flush()?;
            print(
                Json::object()
                    .with("vertices", mesh.vertices().len())
                    .with("triangles", mesh.triangles().len())
                    .with("components", connected_components(&mesh))
                    .with("out", out.display().to_string()),
            )
        }
        Command::Contour { field, level, plane_c3, res, r, s, out } => {
            let contours = contour_slice(&field.field(r, s), level, plane_c3, res)?;
            let mut w = create(&out)?;
            write_contour_csv(&contours, &mut w)?;
            w.flush()?;
            print(
                Json::object()
                    .with("polylines", contours.polylines.len())
                    .with("points", contours.points().count())
                    .with("out", out.display().to_string()),
            )
        }
        Command::Freeze { state } => freeze(&require_bell_diag(&read_state(&state)?)?),
        Command::VerifyHierarchy { seed, n_belldiag, n_general, theta_steps, phi_steps } => {
            let grid = MeasurementGrid { theta_steps, phi_steps, ..MeasurementGrid::default() };
            let report = verify_hierarchy(seed, n_belldiag, n_general, &grid)?;
            let family = |r: &geodiscord::sampling::SampleReport| {
                Json::object()
                    .with("n_samples", r.n_samples)
                    .with("n_violations", r.n_violations)
                    .with("worst_margin", if r.n_samples == 0 { None } else { Some(r.worst_margin) })
                    .with("slack", r.slack)
            };
            print(
                Json::object()
                    .with("seed", seed)
                    .with("bell_diag", family(&report.bell_diag))
                    .with("general", family(&report.general))
                    .with("general_cross_party", family(&report.general_cross_party))
                    .with("n_violations", report.n_violations()),
            )?;
            if report.n_violations() > 0 {
                return Err(Failure::Violation(format!("{} hierarchy violations", report.n_violations())));
            }
            Ok(())
        }
    }
}

fn read_state(path: &Path) -> Result<State, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(parse_state(&text)?)
}

fn require_bell_diag(state: &State) -> Result<geodiscord::qstate::BellDiag, Failure> {
    state.bell_diag().ok_or_else(|| Failure::Input("this command needs a Bell-diagonal state".into()))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print(json: Json) -> Outcome {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", json.render())?;
    Ok(())
}

fn measures(state: &State) -> Outcome {
    let json = match state.bell_diag() {
        Some(bd) => Json::object()
            .with("state", "bell_diag")
            .with("c", bd.c())
            .with("method", "closed_form")
            .with("D", quantum_discord_belldiag(&bd)?)
            .with("D_G", geometric_discord_belldiag(&bd))
            .with("C", concurrence_xstate(&bd).concurrence)
            .with("I", mutual_information_belldiag(&bd))
            .with("J", classical_correlation_belldiag(&bd)),
        None => {
            let rho = state.density();
            let d = quantum_discord_oracle(&rho, &MeasurementGrid::default())?;
            let i = mutual_information(&rho);
            Json::object()
                .with("state", if matches!(state, State::Deformed(_)) { "deformed" } else { "matrix" })
                .with("method", "measurement_search")
                .with("D", d)
                .with("D_G", geometric_discord_general(&rho)?.0)
                .with("C", concurrence_wootters(&rho))
                .with("I", i)
                .with("J", i - d)
        }
    };
    print(json)
}

fn evolve(state: &State, channel: &str, p: f64, gamma_time: bool) -> Outcome {
    let kind: ChannelKind = channel.replace('-', "_").parse()?;
    let channel = if gamma_time { Channel::from_gamma_time(kind, p)? } else { Channel::new(kind, p)? };
    let rho = channel.apply(&state.density())?;
    let bloch = rho.to_bloch();
    let vector = |v: &[f64]| Json::from([v[0], v[1], v[2]]);
    let t: Vec<Json> = (0..3).map(|i| Json::from([bloch.t[(i, 0)], bloch.t[(i, 1)], bloch.t[(i, 2)]])).collect();
    let mut json = Json::object()
        .with("channel", kind.name())
        .with("p", channel.p())
        .with("x", vector(bloch.x.as_slice()))
        .with("y", vector(bloch.y.as_slice()))
        .with("T", t)
        .with("D_G", geometric_discord_general(&rho)?.0)
        .with("C", concurrence_wootters(&rho));
    if let Some(bd) = state.bell_diag() {
        json = json.with("D_G_closed_form", channel.geometric_discord_after(&bd));
    }
    print(json)
}

fn freeze(bd: &geodiscord::qstate::BellDiag) -> Outcome {
    let canon = canonicalize_axes(bd);
    let interval = freezing_interval(bd);
    let mut json = Json::object()
        .with("c0", bd.c())
        .with("axes_swapped", canon.swapped)
        .with("sudden_change_point", sudden_change_point(bd))
        .with("freezing_interval", interval.map(|f| [f.p_lo, f.p_hi]))
        .with("frozen_value", interval.map(|f| f.value));
    json = match interval.map(|_| frozen_initial_is_separable(bd)).transpose()? {
        Some(cert) => json
            .with("separable", cert.separable)
            .with("concurrence", cert.pieces.concurrence)
            .with("lambda1", cert.pieces.lambda1)
            .with("lambda2", cert.pieces.lambda2)
            .with("bound", cert.bound)
            .with("ppt_min_eigenvalue", cert.ppt_min_eigenvalue),
        None => json.with("separable", Json::Null),
    };
    print(json)
}
