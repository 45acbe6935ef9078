//! Implementations of the CLI subcommands, each returning a process exit
//! code: 0 when every check is consistent, 1 on an expected-vs-observed
//! mismatch, 2 on a usage or parse error, 3 on a budget refusal.

use std::fs;
use std::io::Read;

use cayley_ci::autengine::{analyze, canonical_form};
use cayley_ci::citester::{
    is_ci_babai, is_ci_both, is_ci_definitional, is_normal_cayley, m_dci_status, predicted_ci,
    CertificateStore, CiError, Counterexample, Mode, NoStore, Verdict,
};
use cayley_ci::digraph::{cayley, Digraph};
use cayley_ci::group::{ConnectionSet, GroupKind, GroupSpec};
use cayley_ci::permgroup::Partition;

use crate::output::{group_name, OutputFormat, SetRow, CSV_HEADER};
use crate::{ExportArgs, InspectArgs, MethodArg, ReportArgs, SweepArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_REFUSAL: u8 = 3;

fn usage_error(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn refusal(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    EXIT_REFUSAL
}

pub fn report(args: &ReportArgs) -> u8 {
    let spec = match GroupSpec::parse(&args.group) {
        Ok(spec) => spec,
        Err(e) => return usage_error(e),
    };
    let set = match ConnectionSet::parse(&spec, &args.set) {
        Ok(set) => set,
        Err(e) => return usage_error(e),
    };
    let budget = args.budget.budget();
    let outcome = match args.method {
        MethodArg::Definitional => is_ci_definitional(&spec, &set, &budget),
        MethodArg::Babai => is_ci_babai(&spec, &set, &budget),
        MethodArg::Both => is_ci_both(&spec, &set, &budget),
    };
    let report = match outcome {
        Ok(report) => report,
        Err(e) => return refusal(e),
    };
    let mode = if set.is_inverse_closed(&spec) {
        Mode::Graph
    } else {
        Mode::Digraph
    };
    let row = SetRow::from_report(&report, mode);
    match args.format {
        OutputFormat::Table => {
            print!("{}", row.table_block());
            if let Some(rival) = &report.rival_subgroup {
                println!("rival generators:");
                for generator in rival.generators() {
                    println!("  {generator}");
                }
            }
            if !report.conjugator_examples.is_empty() {
                println!(
                    "conjugators {} example(s) mapping right translations onto regular subgroups",
                    report.conjugator_examples.len()
                );
            }
        }
        OutputFormat::Csv => {
            println!("{CSV_HEADER}");
            println!("{}", row.csv());
        }
        OutputFormat::Lines => println!("{}", row.line()),
    }
    EXIT_OK
}

pub fn sweep(args: &SweepArgs) -> u8 {
    let kind = match args.group.trim() {
        "dihedral" => GroupKind::Dihedral,
        "cyclic" => GroupKind::Cyclic,
        other => {
            return usage_error(format!(
                "sweeps take --group dihedral or --group cyclic, got {other:?}"
            ))
        }
    };
    let mut specs = Vec::new();
    for &n in &args.n.0 {
        let spec = match kind {
            GroupKind::Dihedral => GroupSpec::dihedral(n),
            GroupKind::Cyclic => GroupSpec::cyclic(n),
        };
        match spec {
            Ok(spec) => specs.push(spec),
            Err(e) => return usage_error(e),
        }
    }

    let store_owned = match args.cache.open_store() {
        Ok(store) => store,
        Err(e) => return refusal(format!("cannot open cache directory: {e}")),
    };
    let store: &dyn CertificateStore = match &store_owned {
        Some(fs_store) => fs_store,
        None => &NoStore,
    };

    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => return refusal(format!("cannot start worker pool: {e}")),
    };

    let budget = args.budget.budget();
    let mode = args.mode.into();
    let mut had_mismatch = false;
    let mut had_refusal = false;

    if args.format == OutputFormat::Csv {
        println!("{CSV_HEADER}");
    }
    for spec in &specs {
        for &valency in &args.valency.0 {
            let valency = valency as usize;
            let cell = pool
                .install(|| m_dci_status(spec, valency, mode, args.connected_only, &budget, store));
            let prefix = format!(
                "group={} valency={valency} mode={mode} connected_only={}",
                group_name(spec),
                args.connected_only
            );
            match cell {
                Err(e) => {
                    had_refusal = true;
                    emit_summary(args.format, &format!("{prefix} refused: {e}"));
                    if !matches!(
                        e,
                        CiError::SubsetBudgetExceeded { .. }
                            | CiError::AutTooLarge { .. }
                            | CiError::Digraph(_)
                    ) {
                        return refusal(e);
                    }
                }
                Ok(result) => {
                    let predicted = predicted_ci(spec, valency, mode, args.connected_only);
                    let observed_all_ci = result.counterexamples.is_empty();
                    let status = match predicted {
                        Some(p) if p == observed_all_ci => "ok",
                        Some(_) => {
                            had_mismatch = true;
                            "MISMATCH"
                        }
                        None => "no-claim",
                    };
                    let describe = |all_ci: bool| if all_ci { "all-CI" } else { "counterexample" };
                    emit_summary(
                        args.format,
                        &format!(
                            "{prefix} total={} ci={} non_ci={} predicted={} observed={} status={status}",
                            result.total_sets,
                            result.ci_count,
                            result.non_ci_count(),
                            predicted.map_or("none".to_string(), |p| describe(p).to_string()),
                            describe(observed_all_ci),
                        ),
                    );
                    for example in &result.counterexamples {
                        let row = counterexample_row(spec, valency, mode, example);
                        match args.format {
                            OutputFormat::Table => println!(
                                "  counterexample set={} orbit_size={} aut_order={}",
                                row.set, example.orbit_size, row.aut_order
                            ),
                            OutputFormat::Csv => println!("{}", row.csv()),
                            OutputFormat::Lines => println!("{}", row.line()),
                        }
                    }
                }
            }
        }
    }

    if let Some(fs_store) = &store_owned {
        let (lookups, hits) = (fs_store.lookups(), fs_store.hits());
        eprintln!(
            "cache: {lookups} lookups, {hits} hits ({:.1}%)",
            100.0 * hits as f64 / lookups.max(1) as f64
        );
        if fs_store.repaired() > 0 {
            eprintln!("cache: {} entries repaired", fs_store.repaired());
        }
    }
    if had_mismatch {
        EXIT_MISMATCH
    } else if had_refusal {
        EXIT_REFUSAL
    } else {
        EXIT_OK
    }
}

/// Cell summaries share stdout with the table format but move to stderr
/// for machine-readable formats, whose stdout carries only records.
fn emit_summary(format: OutputFormat, line: &str) {
    match format {
        OutputFormat::Table => println!("{line}"),
        OutputFormat::Csv | OutputFormat::Lines => eprintln!("{line}"),
    }
}

fn counterexample_row(
    spec: &GroupSpec,
    valency: usize,
    mode: Mode,
    example: &Counterexample,
) -> SetRow {
    let aut_order = cayley(spec, &example.set)
        .ok()
        .map(|graph| analyze(&graph).aut_order)
        .map_or("".to_string(), |order| {
            order.map_or("overflow".to_string(), |o| o.to_string())
        });
    let normal = is_normal_cayley(spec, &example.set)
        .map(|b| b.to_string())
        .unwrap_or_default();
    SetRow {
        group: group_name(spec),
        n: spec.n(),
        valency,
        mode: mode.to_string(),
        set: example.set.to_string(),
        verdict: Verdict::NotCi.to_string(),
        method: "definitional".to_string(),
        aut_order,
        normal,
        witness: String::new(),
        rival_order: String::new(),
    }
}

pub fn fixtures() -> u8 {
    let mut rows: Vec<(String, String, String)> = Vec::new();
    let mut check = |name: &str, expected: String, observed: String| {
        rows.push((name.to_string(), expected, observed));
    };

    let aut_order_of = |n: u64, set_text: &str| -> String {
        let spec = GroupSpec::dihedral(n).unwrap();
        let set = ConnectionSet::parse(&spec, set_text).unwrap();
        match analyze(&cayley(&spec, &set).unwrap()).aut_order {
            Some(order) => order.to_string(),
            None => "overflow".to_string(),
        }
    };

    check("k33-aut-order", "72".into(), aut_order_of(3, "b,a*b,a^2*b"));
    check(
        "heawood-aut-order",
        "336".into(),
        aut_order_of(7, "b,a*b,a^3*b"),
    );
    check(
        "d26-cubic-aut-order",
        "78".into(),
        aut_order_of(13, "b,a*b,a^4*b"),
    );

    for n in [3u64, 5, 7] {
        check(
            &format!("odd-family-aut-order-n{n}"),
            ((1u128 << (n + 1)) * n as u128).to_string(),
            aut_order_of(n, "a,a^-1,a^2*b,b"),
        );
    }

    for n in [4u64, 6, 8] {
        let spec = GroupSpec::dihedral(n).unwrap();
        let set_text = format!("a,a^-1,a*b,a^{}*b", n / 2 + 1);
        let set = ConnectionSet::parse(&spec, &set_text).unwrap();
        let observed = match is_ci_both(&spec, &set, &Default::default()) {
            Ok(report) => report.verdict.to_string(),
            Err(e) => format!("error: {e}"),
        };
        check(
            &format!("even-family-not-ci-n{n}"),
            "not-CI".into(),
            observed,
        );
    }

    {
        let n = 5u64;
        let spec = GroupSpec::dihedral(n).unwrap();
        let set = ConnectionSet::parse(&spec, "a,a^-1,a^2*b,b").unwrap();
        let graph = cayley(&spec, &set).unwrap();
        let blocks: Vec<Vec<usize>> = (0..n as i64)
            .map(|i| {
                vec![
                    spec.index_of(spec.rotation(i)),
                    spec.index_of(spec.element(1 - i, true).unwrap()),
                ]
            })
            .collect();
        let partition = Partition::new(spec.order(), blocks).unwrap();
        let quotient_matches = canonical_form(&graph.quotient(&partition).unwrap())
            == canonical_form(&Digraph::cycle(n as usize).unwrap());
        check(
            "odd-family-quotient-is-cycle-n5",
            "true".into(),
            quotient_matches.to_string(),
        );

        let product = Digraph::cycle(n as usize)
            .unwrap()
            .lex_product(&Digraph::empty_graph(2).unwrap())
            .unwrap();
        let product_matches = canonical_form(&product) == canonical_form(&graph);
        check(
            "odd-family-lex-product-n5",
            "true".into(),
            product_matches.to_string(),
        );
    }

    {
        let spec = GroupSpec::dihedral(4).unwrap();
        let set = ConnectionSet::parse(&spec, "a,a^3,a*b,a^3*b").unwrap();
        let matches = canonical_form(&cayley(&spec, &set).unwrap())
            == canonical_form(&Digraph::complete_bipartite(4, 4).unwrap());
        check(
            "even-family-k44-certificate",
            "true".into(),
            matches.to_string(),
        );
    }

    let name_width = rows.iter().map(|r| r.0.len()).max().unwrap_or(8).max(8);
    let expected_width = rows.iter().map(|r| r.1.len()).max().unwrap_or(8).max(8);
    let observed_width = rows.iter().map(|r| r.2.len()).max().unwrap_or(8).max(8);
    println!(
        "{:<name_width$}  {:<expected_width$}  {:<observed_width$}  status",
        "fixture", "expected", "observed"
    );
    let mut all_ok = true;
    for (name, expected, observed) in &rows {
        let ok = expected == observed;
        all_ok &= ok;
        println!(
            "{name:<name_width$}  {expected:<expected_width$}  {observed:<observed_width$}  {}",
            if ok { "ok" } else { "FAIL" }
        );
    }
    if all_ok {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

pub fn export(args: &ExportArgs) -> u8 {
    let spec = match GroupSpec::parse(&args.group) {
        Ok(spec) => spec,
        Err(e) => return usage_error(e),
    };
    let set = match ConnectionSet::parse(&spec, &args.set) {
        Ok(set) => set,
        Err(e) => return usage_error(e),
    };
    let graph = match cayley(&spec, &set) {
        Ok(graph) => graph,
        Err(e) => return refusal(e),
    };
    let text = graph.to_text();
    match &args.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                return refusal(format!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
    EXIT_OK
}

pub fn inspect(args: &InspectArgs) -> u8 {
    let text = if args.input == "-" {
        let mut buffer = String::new();
        if let Err(e) = std::io::stdin().read_to_string(&mut buffer) {
            return usage_error(format!("cannot read stdin: {e}"));
        }
        buffer
    } else {
        match fs::read_to_string(&args.input) {
            Ok(text) => text,
            Err(e) => return usage_error(format!("cannot read {}: {e}", args.input)),
        }
    };
    let graph = match Digraph::from_text(&text) {
        Ok(graph) => graph,
        Err(e) => return usage_error(e),
    };
    let analysis = analyze(&graph);
    let degrees: Vec<usize> = (0..graph.vertex_count())
        .map(|v| graph.out_degree(v))
        .collect();
    println!("vertices    {}", graph.vertex_count());
    println!("arcs        {}", graph.arc_count());
    println!("graph       {}", graph.is_graph());
    println!("connected   {}", graph.strongly_connected());
    println!(
        "out_degree  {}..{}",
        degrees.iter().min().unwrap(),
        degrees.iter().max().unwrap()
    );
    match analysis.aut_order {
        Some(order) => println!("aut_order   {order}"),
        None => println!("aut_order   overflow"),
    }
    if args.canonical {
        print!("{}", analysis.certificate.to_digraph().to_text());
    }
    EXIT_OK
}
