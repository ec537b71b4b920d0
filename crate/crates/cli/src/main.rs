use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use molr::enumerate::{budget_from_env, enumerate_levels, Filter, LevelCounts, Population};
use molr::format::{parse_records, write_incidence, write_records, MolrRecord};
use molr::galois::galois_mols;
use molr::geometry::{check_plane, complete_to_projective, partial_net, sandler_delete, SandlerSelection};
use molr::verify::{self, Suite};
use molr::{canonical_form, paratopism_key, MolrError};

const EXIT_MISMATCH: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(name = "molr", version, about = "Mutually orthogonal Latin rectangles: enumeration, symmetry, geometry")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate isotopism classes of k x n t-MOLR.
    Enumerate {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        t: usize,
        /// Final number of rows (defaults to n).
        #[arg(short)]
        k: Option<usize>,
        /// none, sH (stepwise homogeneous) or sT (stepwise transitive).
        #[arg(long, default_value = "none")]
        filter: Filter,
        /// Write the final level's records here (`-` for stdout).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Cap on classes held per level (default: MOLR_BUDGET or built-in).
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Recompute reference tables and compare.
    Verify {
        /// Suites to run: n4 n5 n6 n7-selected galois fixtures (default: all but n7-selected).
        suites: Vec<Suite>,
        #[arg(long)]
        budget: Option<usize>,
        /// Print every check, not just mismatches.
        #[arg(long)]
        verbose: bool,
    },
    /// Autotopism order and flags of each record; checks any header values.
    Classify { input: PathBuf },
    /// Rewrite each record as its class representative with aut and flags.
    Canon {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Group records into paratopism classes.
    Paratopism { input: PathBuf },
    /// The (n-1)-MOLS of order n over GF(n), optionally truncated to k rows.
    Galois {
        n: usize,
        #[arg(short)]
        k: Option<usize>,
    },
    /// Incidence structures built from a record.
    Geometry {
        #[command(subcommand)]
        cmd: GeoCmd,
    },
}

#[derive(Subcommand)]
enum GeoCmd {
    /// Partial net of the first record.
    Net {
        input: PathBuf,
        /// Also print the plane report.
        #[arg(long)]
        report: bool,
    },
    /// Projective completion of a full set of MOLS.
    Complete {
        input: PathBuf,
        #[arg(long)]
        report: bool,
    },
    /// Delete lines (with their points) from the projective completion.
    Sandler {
        input: PathBuf,
        /// Three non-concurrent line indices, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["non_row", "lines"])]
        classical: Option<Vec<usize>>,
        /// One line that is not a row line.
        #[arg(long)]
        non_row: Option<usize>,
        /// Arbitrary line indices, comma separated.
        #[arg(long, value_delimiter = ',')]
        lines: Option<Vec<usize>>,
        /// Start from the partial net instead of the completion.
        #[arg(long)]
        net: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Mismatch(String),
    Usage(String),
    Core(MolrError),
    Io(io::Error),
}

impl From<MolrError> for Failure {
    fn from(e: MolrError) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Res<T> = Result<T, Failure>;

fn read_input(path: &PathBuf) -> Res<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn read_records(path: &PathBuf) -> Res<Vec<MolrRecord>> {
    let recs = parse_records(&read_input(path)?)?;
    if recs.is_empty() {
        return Err(Failure::Usage(format!("{}: no records", path.display())));
    }
    Ok(recs)
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Res<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, text)?,
        _ => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn level_line(k: usize, c: &LevelCounts) -> String {
    let totals: Vec<String> =
        Population::ALL.iter().map(|&p| format!("{}={}", p.name(), c.total(p))).collect();
    format!("k={k} {} paratopism={}", totals.join(" "), c.paratopism)
}

fn enumerate(n: usize, t: usize, k: Option<usize>, filter: Filter, output: Option<PathBuf>, budget: usize) -> Res<()> {
    let k = k.unwrap_or(n);
    let mut lines = Vec::new();
    let f = enumerate_levels(n, t, k, filter, budget, |level| {
        lines.push(level_line(level.k, &LevelCounts::from_classes(&level.classes)));
    })?;
    if let Some(path) = output.as_ref() {
        let recs: Vec<MolrRecord> = f.classes.iter().map(MolrRecord::from_class).collect();
        write_output(Some(path), &write_records(&recs))?;
    }
    if output.as_ref().is_some_and(|p| p.as_os_str() == "-") {
        eprintln!("{}", lines.join("\n"));
    } else {
        println!("{}", lines.join("\n"));
    }
    Ok(())
}

fn verify_cmd(suites: Vec<Suite>, budget: usize, verbose: bool) -> Res<()> {
    let suites = if suites.is_empty() {
        Suite::ALL.into_iter().filter(|&s| s != Suite::N7Selected).collect()
    } else {
        suites
    };
    let mut failed = 0;
    for s in suites {
        let r = verify::run(s, budget)?;
        let bad = r.mismatches().count();
        println!("{s}: {} checks, {bad} mismatches, {:.2?}", r.checks.len(), r.elapsed);
        for c in &r.checks {
            if verbose || !c.passed() {
                let tag = if c.passed() { "ok" } else { "MISMATCH" };
                println!("  {tag} {}: expected {} got {}", c.cell, c.expected, c.got);
            }
        }
        failed += bad;
    }
    if failed > 0 {
        return Err(Failure::Mismatch(format!("{failed} mismatches")));
    }
    Ok(())
}

fn classify(input: PathBuf) -> Res<()> {
    let mut bad = 0;
    for (i, r) in read_records(&input)?.iter().enumerate() {
        let rec = canonical_form(&r.molr);
        let m = &r.molr;
        let status = match r.check_header(&rec) {
            Ok(()) => "ok".to_string(),
            Err(e) => {
                bad += 1;
                format!("MISMATCH {e}")
            }
        };
        println!(
            "record {i}: n={} k={} t={} aut={} flags={} orbits={:?} {status}",
            m.n(),
            m.k(),
            m.t(),
            rec.aut_order,
            rec.flags.code(),
            rec.rect_orbits
        );
    }
    if bad > 0 {
        return Err(Failure::Mismatch(format!("{bad} records disagree with their headers")));
    }
    Ok(())
}

fn canon(input: PathBuf, output: Option<PathBuf>) -> Res<()> {
    let recs: Vec<MolrRecord> =
        read_records(&input)?.iter().map(|r| MolrRecord::from_class(&canonical_form(&r.molr))).collect();
    write_output(output.as_ref(), &write_records(&recs))
}

fn paratopism(input: PathBuf) -> Res<()> {
    let recs = read_records(&input)?;
    let mut classes: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    for (i, r) in recs.iter().enumerate() {
        classes.entry(paratopism_key(&r.molr)).or_default().push(i);
    }
    println!("{} records, {} paratopism classes", recs.len(), classes.len());
    let mut groups: Vec<&Vec<usize>> = classes.values().collect();
    groups.sort();
    for (c, members) in groups.into_iter().enumerate() {
        let ids: Vec<String> = members.iter().map(|i| i.to_string()).collect();
        println!("class {c}: records {}", ids.join(" "));
    }
    Ok(())
}

fn galois(n: usize, k: Option<usize>) -> Res<()> {
    let mut m = galois_mols(n)?;
    if let Some(k) = k {
        m = m.truncate_rows(k)?;
    }
    write_output(None, &write_records(&[MolrRecord::bare(m)]))
}

fn geometry(cmd: GeoCmd) -> Res<()> {
    match cmd {
        GeoCmd::Net { input, report } => {
            let net = partial_net(&read_records(&input)?[0].molr);
            print!("{}", write_incidence(&net));
            if report {
                println!("# {}", check_plane(&net).to_string().replace('\n', "\n# "));
            }
        }
        GeoCmd::Complete { input, report } => {
            let plane = complete_to_projective(&read_records(&input)?[0].molr)?;
            print!("{}", write_incidence(&plane));
            if report {
                println!("# {}", check_plane(&plane).to_string().replace('\n', "\n# "));
            }
        }
        GeoCmd::Sandler { input, classical, non_row, lines, net } => {
            let m = &read_records(&input)?[0].molr;
            let s = if net { partial_net(m) } else { complete_to_projective(m)? };
            let sel = match (classical, non_row, lines) {
                (Some(c), None, None) => {
                    let arr: [usize; 3] = c
                        .try_into()
                        .map_err(|_| Failure::Usage("--classical takes exactly three lines".into()))?;
                    SandlerSelection::Classical(arr)
                }
                (None, Some(l), None) => SandlerSelection::NonRow(l),
                (None, None, Some(ls)) => SandlerSelection::Lines(ls),
                _ => return Err(Failure::Usage("give exactly one of --classical, --non-row, --lines".into())),
            };
            let out = sandler_delete(&s, &sel)?;
            print!("{}", write_incidence(&out.structure));
            println!("# {}", out.report.to_string().replace('\n', "\n# "));
            if let Some(c) = out.curvature {
                println!("# curvature={c}");
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Res<()> {
    if let Some(w) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let budget = |b: Option<usize>| b.unwrap_or_else(budget_from_env);
    match cli.cmd {
        Cmd::Enumerate { n, t, k, filter, output, budget: b } => enumerate(n, t, k, filter, output, budget(b)),
        Cmd::Verify { suites, budget: b, verbose } => verify_cmd(suites, budget(b), verbose),
        Cmd::Classify { input } => classify(input),
        Cmd::Canon { input, output } => canon(input, output),
        Cmd::Paratopism { input } => paratopism(input),
        Cmd::Galois { n, k } => galois(n, k),
        Cmd::Geometry { cmd } => geometry(cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = match &f {
                Failure::Mismatch(_) => EXIT_MISMATCH,
                Failure::Core(MolrError::BudgetExceeded { .. }) => EXIT_BUDGET,
                Failure::Io(_) => 1,
                _ => EXIT_USAGE,
            };
            match f {
                Failure::Mismatch(m) | Failure::Usage(m) => eprintln!("molr: {m}"),
                Failure::Core(e) => eprintln!("molr: {e}"),
                Failure::Io(e) => eprintln!("molr: {e}"),
            }
            ExitCode::from(code)
        }
    }
}
