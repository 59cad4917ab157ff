//! Batch verification front end.
//!
//! Four subcommands: `catalog` (object/morphism inventories), `verify`
//! (model-axiom suites), `cof` (cofibration verdicts and cross-method
//! agreement), `theorem` (the full descent certificate). All options are
//! flags; there is no configuration file and no environment lookup, so an
//! invocation line fully determines the output bytes.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails
//! (the witness is part of the printed report), 2 on input errors.

use clap::{Parser, Subcommand, ValueEnum};
use comodel::comodule::Catalog;
use comodel::model::{shared_catalog, CofMethod};
use comodel::report::{
    axiom_markdown, catalog_markdown, cof_markdown, descent_markdown, render_json,
    AxiomReportWire, CatalogReportWire, CofAgreementWire, CofDisagreementWire, CofReportWire,
    DescentReportWire,
};
use comodel::{
    discrete_structure, equalizer_check, run_self_test, run_theorem_with, structure_a,
    structure_b, verify_axioms, Role,
};
use std::collections::BTreeMap;
use std::process::ExitCode;

/// Above this bound, hom-space enumeration (growing as 2^(n·m)) leaves
/// desk scale.
const HARD_CAP: usize = 6;

#[derive(Parser)]
#[command(name = "comodel", version, about = "Certificates for model structures on k[x]/x^2-comodules over GF(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SiteArg {
    Torsor,
    Point,
    Overlap,
}

impl SiteArg {
    fn role(self) -> Role {
        match self {
            SiteArg::Torsor => Role::TorsorSide,
            SiteArg::Point => Role::PointSide,
            SiteArg::Overlap => Role::OverlapSide,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum StructureArg {
    A,
    B,
    Discrete,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Llp,
    Generate,
}

#[derive(Subcommand)]
enum Command {
    /// Print object and morphism counts with normal forms.
    Catalog {
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        #[arg(long, value_enum, default_value_t = SiteArg::Torsor)]
        site: SiteArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Override the hard dimension cap (prints a warning).
        #[arg(long)]
        force: bool,
    },
    /// Run the closed-model-axiom suite for one structure.
    Verify {
        #[arg(long, value_enum)]
        structure: StructureArg,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        /// Site for the discrete structure (a and b live on the comodule
        /// side).
        #[arg(long, value_enum, default_value_t = SiteArg::Torsor)]
        site: SiteArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long)]
        force: bool,
    },
    /// Cofibration verdicts for every catalog morphism plus the
    /// cross-method agreement matrix.
    Cof {
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        /// Recipe length bound for the generation method.
        #[arg(long, default_value_t = 3)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long)]
        force: bool,
    },
    /// Run the full descent certificate and the equalizer check.
    Theorem {
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        /// Composite length and coproduct arity bound for transfers.
        #[arg(long, default_value_t = 3)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Negative control: compare the coreflective structure with
        /// itself. No descent failure can be certified, so this exits 1.
        #[arg(long)]
        self_test: bool,
        #[arg(long)]
        force: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn check_bound(max_dim: usize, lower: usize, force: bool) -> Result<(), String> {
    if max_dim < lower {
        return Err(format!("max-dim must be at least {lower}, got {max_dim}"));
    }
    if max_dim > HARD_CAP {
        if force {
            eprintln!(
                "warning: max-dim {max_dim} exceeds the hard cap {HARD_CAP}; \
                 hom-space enumeration grows as 2^(n*m) and this run may not finish"
            );
        } else {
            return Err(format!(
                "max-dim {max_dim} exceeds the hard cap {HARD_CAP} (use --force to override)"
            ));
        }
    }
    Ok(())
}

fn catalog_at(max_dim: usize, role: Role) -> Catalog {
    // The CLI enforces the cap policy itself; above the default cap the
    // catalog is built uncapped after the warning.
    Catalog::with_cap(max_dim, role, max_dim.max(HARD_CAP)).expect("cap already validated")
}

fn run(command: Command) -> Result<bool, String> {
    match command {
        Command::Catalog { max_dim, site, format, force } => {
            check_bound(max_dim, 0, force)?;
            let cat = catalog_at(max_dim, site.role());
            let wire = CatalogReportWire::from_catalog(&cat);
            match format {
                FormatArg::Json => println!("{}", render_json(&wire)),
                FormatArg::Markdown => print!("{}", catalog_markdown(&wire)),
            }
            Ok(true)
        }
        Command::Verify { structure, max_dim, site, format, force } => {
            check_bound(max_dim, 0, force)?;
            let ms = match structure {
                StructureArg::A => structure_a(),
                StructureArg::B => structure_b(),
                StructureArg::Discrete => discrete_structure(site.role()),
            };
            if matches!(structure, StructureArg::A | StructureArg::B)
                && !matches!(site, SiteArg::Torsor)
            {
                return Err("structures a and b live on the torsor site".into());
            }
            let cat = shared_catalog(ms.role(), max_dim);
            let report = verify_axioms(&ms, &cat);
            let wire: AxiomReportWire = (&report).into();
            match format {
                FormatArg::Json => println!("{}", render_json(&wire)),
                FormatArg::Markdown => print!("{}", axiom_markdown(&wire)),
            }
            Ok(wire.all_pass)
        }
        Command::Cof { method, max_dim, steps, format, force } => {
            check_bound(max_dim, 0, force)?;
            let wire = cof_survey(method, max_dim, steps);
            let pass = wire.agreement.all_agree;
            match format {
                FormatArg::Json => println!("{}", render_json(&wire)),
                FormatArg::Markdown => print!("{}", cof_markdown(&wire)),
            }
            Ok(pass)
        }
        Command::Theorem { max_dim, steps, format, self_test, force } => {
            check_bound(max_dim, 2, force)?;
            let report = if self_test {
                run_self_test(max_dim, steps)
            } else {
                run_theorem_with(max_dim, steps)
            }
            .map_err(|e| e.to_string())?;
            let pass = equalizer_check(&report);
            let wire: DescentReportWire = (&report).into();
            match format {
                FormatArg::Json => println!("{}", render_json(&wire)),
                FormatArg::Markdown => print!("{}", descent_markdown(&wire)),
            }
            Ok(pass)
        }
    }
}

fn cof_survey(method: MethodArg, max_dim: usize, steps: usize) -> CofReportWire {
    let methods = [
        CofMethod::ClosedForm,
        CofMethod::LlpBounded(max_dim),
        CofMethod::GenerationBounded(steps, max_dim),
    ];
    let primary = match method {
        MethodArg::Closed => methods[0],
        MethodArg::Llp => methods[1],
        MethodArg::Generate => methods[2],
    };
    let cat = shared_catalog(Role::TorsorSide, max_dim);

    let mut true_counts: BTreeMap<String, usize> =
        methods.iter().map(|m| (m.label(), 0)).collect();
    let mut checked = 0usize;
    let mut disagreements = 0usize;
    let mut first_disagreement = None;
    for (_, _, g) in cat.stream_all() {
        checked += 1;
        let verdicts: Vec<bool> =
            methods.iter().map(|m| comodel::cof_membership(&g, *m).verdict).collect();
        for (m, v) in methods.iter().zip(&verdicts) {
            if *v {
                *true_counts.get_mut(&m.label()).unwrap() += 1;
            }
        }
        if verdicts.iter().any(|&v| v != verdicts[0]) {
            disagreements += 1;
            if first_disagreement.is_none() {
                first_disagreement = Some(CofDisagreementWire {
                    morphism: (&g).into(),
                    verdicts: methods
                        .iter()
                        .zip(&verdicts)
                        .map(|(m, &v)| (m.label(), v))
                        .collect(),
                });
            }
        }
    }

    CofReportWire {
        bound: max_dim,
        steps,
        primary_method: primary.label(),
        morphisms_checked: checked,
        verdict_true_counts: true_counts,
        agreement: CofAgreementWire {
            all_agree: disagreements == 0,
            disagreement_count: disagreements,
            first_disagreement,
        },
    }
}
