use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use qgt::gtmodule::{gamma_of, Generator, ModuleSpec, ModuleSpecFile};
use qgt::qcoeff::Mode;
use qgt::relations::{maximal_set, rr_applicable, Pos, RelationSet, TriState};
use qgt::tableaux::Tableau;
use qgt::verify::{self, Fault};
use qgt::QgtError;

#[derive(Parser)]
#[command(name = "qgt", about = "Quantum Gelfand-Tsetlin tableau modules", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModuleArgs {
    /// Module specification JSON file
    #[arg(long)]
    module: PathBuf,
    /// RNG seed for numeric sampling
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check a relation set for admissibility
    Admissible { relations: PathBuf },
    /// Enumerate the basis within a max-norm radius
    Basis {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        radius: i64,
    },
    /// Apply one generator to one tableau
    Act {
        #[command(flatten)]
        module: ModuleArgs,
        /// Generator name: e1, f2, qeps3, qeps3inv
        #[arg(long)]
        gen: String,
        #[arg(long)]
        tableau: PathBuf,
    },
    /// Write the matrix of every generator on the enumerated basis
    Matrices {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        radius: i64,
        /// Output directory for the matrix files
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify the defining relations and eigenvalue separation
    Verify {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        radius: i64,
        /// Emit the report as JSON instead of text
        #[arg(long)]
        json: bool,
        /// Perturb e_K by +1 on its leading coefficient (negative control)
        #[arg(long, value_name = "K")]
        fault_e: Option<usize>,
    },
    /// Print the Gelfand-Tsetlin eigenvalue table of a tableau
    Gamma {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        tableau: PathBuf,
    },
    /// Decide irreducibility via the maximal-set criterion
    Irreducible {
        #[command(flatten)]
        module: ModuleArgs,
    },
    /// Print the maximal relation set satisfied by a tableau
    Maximal {
        #[arg(long)]
        tableau: PathBuf,
    },
    /// Remove all relations at a vertex, optionally testing applicability
    Rr {
        #[arg(long)]
        relations: PathBuf,
        /// Vertex as `k,i`
        #[arg(long)]
        vertex: String,
        /// Witness tableau for the applicability heuristic
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Half-width of the shift window scanned by the heuristic
        #[arg(long, default_value_t = 8)]
        mrange: i64,
    },
    /// Weyl dimension of a dominant integral weight
    Dim {
        /// Comma-separated weight, e.g. "2,1,0"
        #[arg(long)]
        hw: String,
        /// Also enumerate the standard basis and print its size
        #[arg(long)]
        count: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for malformed input, 3 for mathematical failures, 1 for failed checks.
fn exit_code(e: &QgtError) -> u8 {
    match e {
        QgtError::Pole { .. }
        | QgtError::DivisionByZero
        | QgtError::BadEvaluationPoint
        | QgtError::DegenerateModule { .. }
        | QgtError::SeedViolatesRelations(_) => 3,
        QgtError::NotAdmissible(_) => 1,
        _ => 2,
    }
}

fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, QgtError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| QgtError::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| QgtError::InvalidInput(format!("{}: {e}", path.display())))
}

fn load_module(args: &ModuleArgs) -> Result<ModuleSpec, QgtError> {
    let mut file: ModuleSpecFile = load_json(&args.module)?;
    if let Ok(mode) = std::env::var("QGT_MODE") {
        file.mode = match mode.as_str() {
            "exact" => Mode::Exact,
            "numeric" => Mode::Numeric,
            other => {
                return Err(QgtError::InvalidInput(format!(
                    "QGT_MODE must be exact or numeric, got `{other}`"
                )))
            }
        };
    }
    if matches!(file.mode, Mode::Numeric) {
        let mut cfg = file.numeric.unwrap_or_default();
        cfg.seed = args.seed;
        file.numeric = Some(cfg);
    }
    let spec = ModuleSpec::from_file(file)?;
    if matches!(spec.ctx.mode(), Mode::Numeric) {
        eprintln!("numeric sampling seed: {}", args.seed);
    }
    Ok(spec)
}

fn parse_vertex(s: &str) -> Result<Pos, QgtError> {
    let parts: Vec<_> = s.split(',').collect();
    let err = || QgtError::InvalidInput(format!("vertex must be `k,i`, got `{s}`"));
    if parts.len() != 2 {
        return Err(err());
    }
    let k = parts[0].trim().parse::<usize>().map_err(|_| err())?;
    let i = parts[1].trim().parse::<usize>().map_err(|_| err())?;
    Ok(Pos(k, i))
}

fn run(cmd: Command) -> Result<u8, QgtError> {
    match cmd {
        Command::Admissible { relations } => {
            let set: RelationSet = load_json(&relations)?;
            let report = set.is_admissible()?;
            if report.admissible {
                println!("admissible");
                Ok(0)
            } else {
                println!("not admissible");
                for f in &report.failures {
                    println!("{:?}: {}", f.code, f.witness);
                }
                Ok(1)
            }
        }
        Command::Basis { module, radius } => {
            let spec = load_module(&module)?;
            let basis = spec.enumerate_basis(radius)?;
            let out = serde_json::json!({
                "complete": basis.complete,
                "tableaux": basis.tableaux,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
        Command::Act {
            module,
            gen,
            tableau,
        } => {
            let spec = load_module(&module)?;
            let t: Tableau = load_json(&tableau)?;
            let lc = spec.apply(Generator::parse(&gen)?, &t)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&lc.to_json(&spec.ctx)).unwrap()
            );
            Ok(0)
        }
        Command::Matrices {
            module,
            radius,
            out,
        } => {
            let spec = load_module(&module)?;
            let basis = spec.enumerate_basis(radius)?;
            std::fs::create_dir_all(&out)
                .map_err(|e| QgtError::InvalidInput(format!("{}: {e}", out.display())))?;
            let n = spec.n();
            let mut gens = Vec::new();
            for k in 1..n {
                gens.push(Generator::E(k));
                gens.push(Generator::F(k));
            }
            for k in 1..=n {
                gens.push(Generator::QEps(k, false));
            }
            for gen in gens {
                let m = spec.matrix(gen, &basis.tableaux)?;
                if m.boundary_leak {
                    eprintln!("warning: {gen} maps some window members outside the window");
                }
                let path = out.join(format!("{gen}.mtx"));
                std::fs::write(&path, m.to_text())
                    .map_err(|e| QgtError::InvalidInput(format!("{}: {e}", path.display())))?;
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
        Command::Verify {
            module,
            radius,
            json,
            fault_e,
        } => {
            let spec = load_module(&module)?;
            let fault = fault_e.map(|e_index| Fault { e_index });
            let report = verify::verify_module(&spec, radius, fault)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("{report}");
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Gamma { module, tableau } => {
            let spec = load_module(&module)?;
            let t: Tableau = load_json(&tableau)?;
            let mut table = BTreeMap::new();
            for m in 1..=spec.n() {
                for k in 1..=m {
                    table.insert(
                        format!("{m},{k}"),
                        spec.ctx.scalar_string(&gamma_of(&spec.ctx, &t, m, k)?),
                    );
                }
            }
            println!("{}", serde_json::to_string_pretty(&table).unwrap());
            Ok(0)
        }
        Command::Irreducible { module } => {
            let spec = load_module(&module)?;
            let (maximal, _) = maximal_set(&spec.seed)?;
            let irreducible = spec.relations.implies(&maximal);
            let missing: Vec<String> = maximal
                .relations
                .iter()
                .filter(|r| {
                    let single = RelationSet::new(maximal.n, vec![(*r).clone()]).unwrap();
                    !spec.relations.implies(&single)
                })
                .map(|r| r.to_string())
                .collect();
            let out = serde_json::json!({
                "irreducible": irreducible,
                "maximal": maximal,
                "missing": missing,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(if irreducible { 0 } else { 1 })
        }
        Command::Maximal { tableau } => {
            let t: Tableau = load_json(&tableau)?;
            let (maximal, admissible) = maximal_set(&t)?;
            let out = serde_json::json!({
                "relations": maximal,
                "admissible": admissible,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
        Command::Rr {
            relations,
            vertex,
            witness,
            mrange,
        } => {
            let set: RelationSet = load_json(&relations)?;
            let v = parse_vertex(&vertex)?;
            let (reduced, removed) = set.rr_remove(v);
            let applicable = match witness {
                Some(path) => {
                    let t: Tableau = load_json(&path)?;
                    Some(match rr_applicable(&set, &t, v, mrange)? {
                        TriState::Yes => "yes",
                        TriState::No => "no",
                        TriState::Unknown => "unknown",
                    })
                }
                None => None,
            };
            let out = serde_json::json!({
                "relations": reduced,
                "removed": removed,
                "applicable": applicable,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
        Command::Dim { hw, count } => {
            let lambda: Vec<i64> = hw
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<i64>()
                        .map_err(|_| QgtError::InvalidInput(format!("bad weight entry `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            let dim = verify::weyl_dimension(&lambda)?;
            if count {
                let spec = verify::standard_module_spec(&lambda)?;
                let spread = lambda.first().unwrap() - lambda.last().unwrap();
                let basis = spec.enumerate_basis(spread + lambda.len() as i64 + 1)?;
                println!("{dim} {}", basis.tableaux.len());
            } else {
                println!("{dim}");
            }
            Ok(0)
        }
    }
}
