//! Command-line frontend for the scene-graph ontology pipeline.
//!
//! Exit codes: 0 on success, 1 on a semantic validation failure (ontology
//! diagnostics, unresolved references, mismatched inputs), 2 on an input
//! format error (missing or unparseable file).

use clap::{Args, Parser, Subcommand, ValueEnum};
use ontoscene::baseline::{score_image, FrequencyPrior};
use ontoscene::dataset::{
    apply_predicate_map, augment_with_inference, build_seen_triplet_registry, compute_stats,
    filter_by_tag, load_dataset, load_predicate_map, save_dataset, stratified_split, DatasetError,
    DatasetStats, SceneGraph, SeenTripletRegistry, SplitManifest,
};
use ontoscene::metrics::{evaluate, render_report, Aggregation, MetricsConfig};
use ontoscene::ontology::{Ontology, OntologyError, Severity};
use ontoscene::postproc::{
    emit_graph, load_scores, save_scores, select_top, tensor_filter, EmitFormat, ImageScores,
    PruneReason, ScoredTriplet, SelectionConfig,
};
use ontoscene::reasoner::{
    inference_closure, AxiomKind, ConstraintTensor, Provenance, Triplet, TripletSet,
};
use serde::Serialize;
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ontoscene",
    about = "Ontology-guided scene graph tooling",
    after_help = "Exit codes: 0 success, 1 validation failure, 2 input-format error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an ontology and report diagnostics.
    Validate {
        /// Ontology file.
        #[arg(long)]
        ontology: PathBuf,
    },
    /// Convert a dataset: tag filter, predicate mapping, optional
    /// inference augmentation, statistics and an optional stratified split.
    Convert(ConvertArgs),
    /// Print dataset statistics.
    Stats {
        /// Dataset file (one JSON record per line).
        #[arg(long)]
        dataset: PathBuf,
        /// Emit machine-readable JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Fit the frequency prior on a training set and score a test set.
    Baseline(BaselineArgs),
    /// Post-process a scores file into selected scene graphs.
    Postprocess(PostprocessArgs),
    /// Compute the predicate-detection metric grid.
    Evaluate(EvaluateArgs),
    /// Constraint-tensor utilities.
    Tensor {
        #[command(subcommand)]
        command: TensorCommand,
    },
}

#[derive(Subcommand)]
enum TensorCommand {
    /// Print every (subject class, object class, predicate, allowed) row.
    Dump {
        /// Ontology file.
        #[arg(long)]
        ontology: PathBuf,
    },
}

#[derive(Args)]
struct ConvertArgs {
    /// Dataset file to convert.
    #[arg(long)]
    dataset: PathBuf,
    /// Ontology file.
    #[arg(long)]
    ontology: PathBuf,
    /// Predicate map file.
    #[arg(long)]
    map: PathBuf,
    /// Output directory.
    #[arg(long)]
    out_dir: PathBuf,
    /// Keep only images carrying this tag (runs before mapping).
    #[arg(long)]
    filter_tag: Option<String>,
    /// Add inferred triplets after mapping.
    #[arg(long)]
    augment: bool,
    /// Reserve this fraction of images for validation.
    #[arg(long)]
    split: Option<f64>,
    /// Seed for the split shuffle.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct BaselineArgs {
    /// Training dataset.
    #[arg(long)]
    train: PathBuf,
    /// Dataset to score.
    #[arg(long)]
    test: PathBuf,
    /// Output scores file.
    #[arg(long)]
    out: PathBuf,
    /// Additive smoothing constant.
    #[arg(long, default_value_t = 1.0)]
    smoothing: f64,
    /// Take the predicate universe from this ontology instead of the
    /// training data.
    #[arg(long)]
    ontology: Option<PathBuf>,
    /// Reuse a previously saved prior instead of fitting.
    #[arg(long)]
    load_prior: Option<PathBuf>,
    /// Save the fitted prior for later runs.
    #[arg(long)]
    save_prior: Option<PathBuf>,
}

#[derive(Args)]
struct PostprocessArgs {
    /// Scores file from an external scorer.
    #[arg(long)]
    scores: PathBuf,
    /// Dataset file providing objects and classes.
    #[arg(long)]
    dataset: PathBuf,
    /// Ontology file.
    #[arg(long)]
    ontology: PathBuf,
    /// Output directory.
    #[arg(long)]
    out_dir: PathBuf,
    /// Explicit-triplet budget K.
    #[arg(long, default_value_t = 16)]
    top_k: usize,
    /// Predicates kept per ordered object pair.
    #[arg(long, default_value_t = 1)]
    graph_constraint: usize,
    /// Disable the domain/range tensor filter.
    #[arg(long)]
    no_tensor: bool,
    /// Disable functional/inverse-functional pruning.
    #[arg(long)]
    no_axioms: bool,
    /// Add entailed triplets to the emitted graphs.
    #[arg(long)]
    expand_implicit: bool,
    /// Also write one graph file per image.
    #[arg(long, value_enum)]
    emit: Option<EmitArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Dot,
    Text,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Ground-truth dataset file.
    #[arg(long)]
    gt: PathBuf,
    /// Scores file.
    #[arg(long)]
    scores: PathBuf,
    /// Top-K cutoffs.
    #[arg(long, value_delimiter = ',', default_values_t = [20, 50, 100])]
    k_values: Vec<usize>,
    /// Graph-constraint values.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 8])]
    graph_constraints: Vec<usize>,
    /// Aggregation mode.
    #[arg(long, value_enum, default_value_t = AggregationArg::PerImage)]
    aggregation: AggregationArg,
    /// Seen-triplet registry file enabling zR@K.
    #[arg(long)]
    zero_shot_registry: Option<PathBuf>,
    /// Only rank proposals on object pairs with ground-truth labels.
    #[arg(long)]
    restrict_to_labeled_pairs: bool,
    /// Also evaluate with ontology post-processing (requires --ontology).
    #[arg(long)]
    post: bool,
    /// Ontology file (needed with --post).
    #[arg(long)]
    ontology: Option<PathBuf>,
    /// Count entailed triplets as proposals in the post-processed run.
    #[arg(long)]
    include_implicit: bool,
    /// Write the machine-readable report(s) here.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AggregationArg {
    PerImage,
    Micro,
}

impl From<AggregationArg> for Aggregation {
    fn from(value: AggregationArg) -> Self {
        match value {
            AggregationArg::PerImage => Aggregation::PerImageMean,
            AggregationArg::Micro => Aggregation::DatasetMicro,
        }
    }
}

// ---------------------------------------------------------------------------
// error handling and exit codes
// ---------------------------------------------------------------------------

enum CliError {
    /// Missing or unparseable input: exit 2.
    Input(String),
    /// Semantic failure: exit 1.
    Validation(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Validation(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Validation(m) => m,
        }
    }
}

impl From<OntologyError> for CliError {
    fn from(err: OntologyError) -> Self {
        match err {
            OntologyError::Syntax { .. } => CliError::Input(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

impl From<DatasetError> for CliError {
    fn from(err: DatasetError) -> Self {
        match err {
            DatasetError::Io { .. } | DatasetError::Malformed { .. } => {
                CliError::Input(err.to_string())
            }
            _ => CliError::Validation(err.to_string()),
        }
    }
}

impl From<ontoscene::postproc::ScoresError> for CliError {
    fn from(err: ontoscene::postproc::ScoresError) -> Self {
        use ontoscene::postproc::ScoresError::*;
        match err {
            Io { .. } | Malformed { .. } => CliError::Input(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

fn require_exists(path: &Path) -> Result<(), CliError> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::Input(format!("no such file: {}", path.display())))
    }
}

fn load_ontology(path: &Path) -> Result<Ontology, CliError> {
    require_exists(path)?;
    let text = std::fs::read_to_string(path)?;
    Ok(Ontology::parse(&text)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { ontology } => cmd_validate(&ontology),
        Command::Convert(args) => cmd_convert(args),
        Command::Stats { dataset, json } => cmd_stats(&dataset, json),
        Command::Baseline(args) => cmd_baseline(args),
        Command::Postprocess(args) => cmd_postprocess(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Tensor {
            command: TensorCommand::Dump { ontology },
        } => cmd_tensor_dump(&ontology),
    }
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

fn cmd_validate(path: &Path) -> Result<(), CliError> {
    let onto = load_ontology(path)?;
    let diagnostics = onto.validate();
    let mut errors = 0;
    for diag in &diagnostics {
        let tag = match diag.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        println!("{tag}: `{}`: {}", diag.subject, diag.message);
        if diag.severity == Severity::Error {
            errors += 1;
        }
    }
    println!(
        "ok: {} classes, {} predicates, {} warnings",
        onto.class_count(),
        onto.predicate_count(),
        diagnostics.len() - errors
    );
    if errors > 0 {
        return Err(CliError::Validation(format!("{errors} error diagnostics")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// convert
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct StageStats {
    stage: String,
    #[serde(flatten)]
    stats: DatasetStats,
}

#[derive(Serialize)]
struct ConvertReport {
    stages: Vec<StageStats>,
    duplicate_triplets_dropped: usize,
    images_without_triplets: Vec<String>,
}

fn cmd_convert(args: ConvertArgs) -> Result<(), CliError> {
    for path in [&args.dataset, &args.ontology, &args.map] {
        require_exists(path)?;
    }
    if let Some(fraction) = args.split {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(CliError::Validation(format!(
                "--split must be in (0, 1), got {fraction}"
            )));
        }
    }
    eprintln!("seed: {}", args.seed);

    let onto = load_ontology(&args.ontology)?;
    let map = load_predicate_map(&args.map)?;
    for target in map.targets() {
        if onto.predicate(target).is_none() {
            return Err(CliError::Validation(format!(
                "predicate map key `{target}` is not declared in the ontology"
            )));
        }
    }

    let loaded = load_dataset(&args.dataset)?;
    if loaded.duplicate_triplets > 0 {
        eprintln!(
            "warning: dropped {} duplicate triplets",
            loaded.duplicate_triplets
        );
    }

    let mut stages: Vec<StageStats> = Vec::new();
    let mut push_stage = |name: &str, graphs: &[SceneGraph]| {
        stages.push(StageStats {
            stage: name.to_string(),
            stats: compute_stats(graphs),
        });
    };

    push_stage("base", &loaded.graphs);
    let mut graphs = loaded.graphs;
    if let Some(tag) = &args.filter_tag {
        graphs = filter_by_tag(graphs, tag);
        push_stage("tag_filtered", &graphs);
    }
    graphs = graphs
        .iter()
        .map(|g| apply_predicate_map(g, &map))
        .collect();
    push_stage("mapped", &graphs);
    if args.augment {
        graphs = graphs
            .iter()
            .map(|g| augment_with_inference(g, &onto))
            .collect::<Result<_, _>>()?;
        push_stage("augmented", &graphs);
    }

    let empty_images: Vec<String> = graphs
        .iter()
        .filter(|g| g.triplets.is_empty())
        .map(|g| g.image_id.clone())
        .collect();

    std::fs::create_dir_all(&args.out_dir)?;
    write_dataset(&args.out_dir.join("converted.jsonl"), &graphs)?;

    let registry_source: &[SceneGraph];
    let split_outcome;
    if let Some(fraction) = args.split {
        split_outcome = stratified_split(graphs.clone(), fraction, args.seed)?;
        write_dataset(&args.out_dir.join("train.jsonl"), &split_outcome.train)?;
        write_dataset(
            &args.out_dir.join("validation.jsonl"),
            &split_outcome.validation,
        )?;
        let manifest = SplitManifest::from_split(&split_outcome, args.seed, fraction);
        std::fs::write(
            args.out_dir.join("manifest.json"),
            manifest.to_json_string(),
        )?;
        registry_source = &split_outcome.train;
        println!(
            "split: {} train / {} validation images",
            split_outcome.train.len(),
            split_outcome.validation.len()
        );
    } else {
        registry_source = &graphs;
    }

    let registry = build_seen_triplet_registry(registry_source);
    write_registry(&args.out_dir.join("seen_triplets.json"), &registry)?;

    let report = ConvertReport {
        stages,
        duplicate_triplets_dropped: loaded.duplicate_triplets,
        images_without_triplets: empty_images,
    };
    std::fs::write(
        args.out_dir.join("stats.json"),
        serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;

    print!("{}", render_stage_table(&report.stages));
    if !report.images_without_triplets.is_empty() {
        println!(
            "images left without triplets after mapping: {}",
            report.images_without_triplets.join(", ")
        );
    }
    println!("outputs written to {}", args.out_dir.display());
    Ok(())
}

fn write_dataset(path: &Path, graphs: &[SceneGraph]) -> Result<(), CliError> {
    let file = std::fs::File::create(path)?;
    save_dataset(graphs, std::io::BufWriter::new(file))?;
    Ok(())
}

fn write_registry(path: &Path, registry: &SeenTripletRegistry) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct RegistryDoc<'a> {
        seen: Vec<[&'a str; 3]>,
    }
    let doc = RegistryDoc {
        seen: registry
            .iter()
            .map(|(s, p, o)| [s.as_str(), p.as_str(), o.as_str()])
            .collect(),
    };
    std::fs::write(
        path,
        serde_json::to_string_pretty(&doc).expect("registry serializes"),
    )?;
    Ok(())
}

fn load_registry(path: &Path) -> Result<SeenTripletRegistry, CliError> {
    require_exists(path)?;
    #[derive(serde::Deserialize)]
    struct RegistryDoc {
        seen: Vec<[String; 3]>,
    }
    let text = std::fs::read_to_string(path)?;
    let doc: RegistryDoc =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("registry file: {e}")))?;
    Ok(doc.seen.into_iter().map(|[s, p, o]| (s, p, o)).collect())
}

fn render_stage_table(stages: &[StageStats]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    write!(out, "{:<26}", "").unwrap();
    for stage in stages {
        write!(out, "{:>14}", stage.stage).unwrap();
    }
    writeln!(out).unwrap();
    let row = |s: &DatasetStats| {
        [
            s.num_images.to_string(),
            format!("{:.2}", s.connected_objects_per_image),
            format!("{:.2}", s.triplets_per_image),
            format!("{:.2}", s.annotated_pairs_per_image),
            format!("{:.2}", s.pct_pairs_annotated),
        ]
    };
    let labels = [
        "images",
        "connected objects/image",
        "triplets/image",
        "annotated pairs/image",
        "% pairs annotated",
    ];
    for (idx, label) in labels.iter().enumerate() {
        write!(out, "{label:<26}").unwrap();
        for stage in stages {
            write!(out, "{:>14}", row(&stage.stats)[idx]).unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

fn cmd_stats(dataset: &Path, json: bool) -> Result<(), CliError> {
    require_exists(dataset)?;
    let loaded = load_dataset(dataset)?;
    let stats = compute_stats(&loaded.graphs);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&stats).expect("stats serialize")
        );
    } else {
        print!(
            "{}",
            render_stage_table(&[StageStats {
                stage: "dataset".into(),
                stats,
            }])
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// baseline
// ---------------------------------------------------------------------------

fn cmd_baseline(args: BaselineArgs) -> Result<(), CliError> {
    for path in [&args.train, &args.test] {
        require_exists(path)?;
    }
    let train = load_dataset(&args.train)?.graphs;
    let test = load_dataset(&args.test)?.graphs;

    let prior = if let Some(path) = &args.load_prior {
        require_exists(path)?;
        let text = std::fs::read_to_string(path)?;
        FrequencyPrior::from_json_str(&text)
            .map_err(|e| CliError::Input(format!("prior file: {e}")))?
    } else if let Some(path) = &args.ontology {
        let onto = load_ontology(path)?;
        let predicates = onto.predicates().map(|p| p.name.clone()).collect();
        FrequencyPrior::fit_with_predicates(&train, args.smoothing, predicates)
    } else {
        FrequencyPrior::fit(&train, args.smoothing)
    };

    if let Some(path) = &args.save_prior {
        std::fs::write(path, prior.to_json_string())?;
    }

    let scores: Vec<ImageScores> = test
        .iter()
        .map(|graph| ImageScores {
            image_id: graph.image_id.clone(),
            scores: score_image(&prior, graph),
        })
        .collect();
    let file = std::fs::File::create(&args.out)?;
    save_scores(&scores, std::io::BufWriter::new(file))?;
    println!(
        "scored {} images over {} predicates -> {}",
        scores.len(),
        prior.predicates().len(),
        args.out.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// postprocess
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ScoredDoc {
    s: u32,
    p: String,
    o: u32,
    score: f64,
}

impl From<&ScoredTriplet> for ScoredDoc {
    fn from(t: &ScoredTriplet) -> Self {
        ScoredDoc {
            s: t.subject,
            p: t.predicate.clone(),
            o: t.object,
            score: t.score,
        }
    }
}

#[derive(Serialize)]
struct ImplicitDoc {
    s: u32,
    p: String,
    o: u32,
    score: f64,
    axiom: AxiomKind,
    sources: Vec<Triplet>,
}

#[derive(Serialize)]
struct PrunedDoc {
    s: u32,
    p: String,
    o: u32,
    score: f64,
    reason: PruneReason,
}

#[derive(Serialize)]
struct ConflictDoc {
    implicit: Triplet,
    conflicts_with: Triplet,
    kind: PruneReason,
}

#[derive(Serialize)]
struct SelectionDoc {
    image_id: String,
    accepted: Vec<ScoredDoc>,
    implicit: Vec<ImplicitDoc>,
    pruned: Vec<PrunedDoc>,
    conflicts: Vec<ConflictDoc>,
}

fn cmd_postprocess(args: PostprocessArgs) -> Result<(), CliError> {
    for path in [&args.scores, &args.dataset, &args.ontology] {
        require_exists(path)?;
    }
    let onto = load_ontology(&args.ontology)?;
    let tensor = ConstraintTensor::build(&onto);
    let graphs = load_dataset(&args.dataset)?.graphs;
    let scores = load_scores(&args.scores)?;

    let graphs_by_id: HashMap<&str, &SceneGraph> =
        graphs.iter().map(|g| (g.image_id.as_str(), g)).collect();

    let config = SelectionConfig {
        top_k: args.top_k,
        graph_constraint: args.graph_constraint,
        apply_tensor_filter: !args.no_tensor,
        apply_axiom_pruning: !args.no_axioms,
        expand_implicit: args.expand_implicit,
    };

    // output ordering is by image id regardless of input order
    let mut scores = scores;
    scores.sort_by(|a, b| a.image_id.cmp(&b.image_id));

    std::fs::create_dir_all(&args.out_dir)?;
    let mut selections = Vec::new();
    for image in &scores {
        let graph = graphs_by_id.get(image.image_id.as_str()).ok_or_else(|| {
            CliError::Validation(format!(
                "scores reference image `{}` absent from the dataset",
                image.image_id
            ))
        })?;
        let class_map = graph.class_map();
        let result = select_top(&image.scores, &config, &onto, &tensor, &class_map)
            .map_err(|e| CliError::Validation(e.to_string()))?;

        if let Some(format) = args.emit {
            let (rendered, extension) = match format {
                EmitArg::Dot => (emit_graph(&result, graph, EmitFormat::Dot), "dot"),
                EmitArg::Text => (emit_graph(&result, graph, EmitFormat::Text), "txt"),
            };
            std::fs::write(
                args.out_dir.join(format!("{}.{extension}", image.image_id)),
                rendered,
            )?;
        }

        selections.push(SelectionDoc {
            image_id: image.image_id.clone(),
            accepted: result.accepted.iter().map(ScoredDoc::from).collect(),
            implicit: result
                .implicit
                .iter()
                .map(|i| ImplicitDoc {
                    s: i.triplet.subject,
                    p: i.triplet.predicate.clone(),
                    o: i.triplet.object,
                    score: i.score,
                    axiom: i.axiom,
                    sources: i.sources.clone(),
                })
                .collect(),
            pruned: result
                .pruned
                .iter()
                .map(|(t, reason)| PrunedDoc {
                    s: t.subject,
                    p: t.predicate.clone(),
                    o: t.object,
                    score: t.score,
                    reason: *reason,
                })
                .collect(),
            conflicts: result
                .implicit_conflicts
                .iter()
                .map(|c| ConflictDoc {
                    implicit: c.implicit.clone(),
                    conflicts_with: c.conflicts_with.clone(),
                    kind: c.kind,
                })
                .collect(),
        });
    }

    let mut out = String::new();
    for doc in &selections {
        out.push_str(&serde_json::to_string(doc).expect("selection serializes"));
        out.push('\n');
    }
    std::fs::write(args.out_dir.join("selections.jsonl"), out)?;

    let accepted: usize = selections.iter().map(|s| s.accepted.len()).sum();
    let pruned: usize = selections.iter().map(|s| s.pruned.len()).sum();
    let implicit: usize = selections.iter().map(|s| s.implicit.len()).sum();
    println!(
        "{} images: {accepted} accepted, {pruned} pruned, {implicit} implicit -> {}",
        selections.len(),
        args.out_dir.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    for path in [&args.gt, &args.scores] {
        require_exists(path)?;
    }
    if args.post && args.ontology.is_none() {
        return Err(CliError::Validation(
            "--post requires --ontology".to_string(),
        ));
    }
    if args.k_values.contains(&0) || args.graph_constraints.contains(&0) {
        return Err(CliError::Validation(
            "K and k values must be positive".to_string(),
        ));
    }

    let gt = load_dataset(&args.gt)?.graphs;
    let scores = load_scores(&args.scores)?;
    let registry = args
        .zero_shot_registry
        .as_deref()
        .map(load_registry)
        .transpose()?;

    let config = MetricsConfig {
        k_values: args.k_values.clone(),
        graph_constraints: args.graph_constraints.clone(),
        aggregation: args.aggregation.into(),
        restrict_to_labeled_pairs: args.restrict_to_labeled_pairs,
        zero_shot_registry: registry,
    };

    let plain = evaluate(&gt, &scores, &config).map_err(|e| CliError::Validation(e.to_string()))?;
    println!("== without post-processing ==");
    print!("{}", render_report(&plain));

    let mut reports = vec![("plain", plain)];
    if args.post {
        let onto = load_ontology(args.ontology.as_deref().expect("checked above"))?;
        let tensor = ConstraintTensor::build(&onto);
        let gt_by_id: HashMap<&str, &SceneGraph> =
            gt.iter().map(|g| (g.image_id.as_str(), g)).collect();

        let mut processed = Vec::with_capacity(scores.len());
        for image in &scores {
            let graph = gt_by_id.get(image.image_id.as_str()).ok_or_else(|| {
                CliError::Validation(format!(
                    "scores reference image `{}` absent from the ground truth",
                    image.image_id
                ))
            })?;
            let survivors = postprocess_for_metrics(
                &image.scores,
                &onto,
                &tensor,
                graph,
                args.include_implicit,
            )?;
            processed.push(ImageScores {
                image_id: image.image_id.clone(),
                scores: survivors,
            });
        }
        let post =
            evaluate(&gt, &processed, &config).map_err(|e| CliError::Validation(e.to_string()))?;
        println!();
        println!("== with post-processing ==");
        print!("{}", render_report(&post));
        reports.push(("post", post));
    }

    if let Some(path) = &args.json_out {
        #[derive(Serialize)]
        struct Combined<'a> {
            plain: &'a ontoscene::metrics::MetricsReport,
            #[serde(skip_serializing_if = "Option::is_none")]
            post: Option<&'a ontoscene::metrics::MetricsReport>,
        }
        let combined = Combined {
            plain: &reports[0].1,
            post: reports.get(1).map(|(_, r)| r),
        };
        std::fs::write(
            path,
            serde_json::to_string_pretty(&combined).expect("reports serialize"),
        )?;
    }
    Ok(())
}

/// Prune one image's proposals for the metric path: tensor filter plus
/// greedy axiom pruning, no per-pair cap and no Top-K cut (those belong to
/// the metric itself). Optionally append the survivors' entailed triplets,
/// each scored like its weakest generator.
fn postprocess_for_metrics(
    proposals: &[ScoredTriplet],
    onto: &Ontology,
    tensor: &ConstraintTensor,
    graph: &SceneGraph,
    include_implicit: bool,
) -> Result<Vec<ScoredTriplet>, CliError> {
    let class_map = graph.class_map();
    let (kept, _) = tensor_filter(proposals, tensor, &class_map)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let (mut survivors, _) = ontoscene::postproc::axiom_prune(&kept, onto)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    if include_implicit {
        let mut score_of: HashMap<Triplet, f64> = HashMap::new();
        let mut set = TripletSet::new();
        for s in &survivors {
            let triplet = s.triplet();
            score_of.entry(triplet.clone()).or_insert(s.score);
            set.insert(triplet, Provenance::Asserted);
        }
        let closed =
            inference_closure(onto, &set).map_err(|e| CliError::Validation(e.to_string()))?;
        // worklist order guarantees sources are scored before derivations
        for (triplet, provenance) in closed.iter() {
            if score_of.contains_key(triplet) {
                continue;
            }
            if let Provenance::Inferred { sources, .. } = provenance {
                let score = sources
                    .iter()
                    .map(|s| score_of[s])
                    .fold(f64::INFINITY, f64::min);
                score_of.insert(triplet.clone(), score);
                survivors.push(ScoredTriplet::new(
                    triplet.subject,
                    triplet.predicate.clone(),
                    triplet.object,
                    score,
                ));
            }
        }
    }
    Ok(survivors)
}

// ---------------------------------------------------------------------------
// tensor dump
// ---------------------------------------------------------------------------

fn cmd_tensor_dump(path: &Path) -> Result<(), CliError> {
    use std::io::Write;
    let onto = load_ontology(path)?;
    let tensor = ConstraintTensor::build(&onto);
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    // stop quietly when the consumer closes the pipe
    if writeln!(out, "subject_class, object_class, predicate, allowed").is_err() {
        return Ok(());
    }
    for (subject, object, predicate, allowed) in tensor.rows() {
        if writeln!(out, "{subject}, {object}, {predicate}, {allowed}").is_err() {
            return Ok(());
        }
    }
    Ok(())
}
