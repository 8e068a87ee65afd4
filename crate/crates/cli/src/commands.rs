//! Subcommand implementations. Every path that reads a dataset goes through
//! the same loader, and every prediction goes through the bundle, so the CLI
//! cannot drift from the library's behavior.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::Serialize;

use veridict_core::bundle::{BundlePayload, ModelBundle, Provenance};
use veridict_core::classifiers::ClassifierModel;
use veridict_core::corpus::{
    class_distribution, format_distribution, load_dataset, split, Corpus, SplitSpec,
};
use veridict_core::eval::{compare, evaluate, format_compare, format_report, Evaluation};
use veridict_core::features::{
    build_vocabulary, featurize, fit_idf, top_terms, top_terms_per_class, vectorize,
    Representation, TermCount,
};
use veridict_core::preprocess::{Preprocessor, StopwordList};
use veridict_core::{
    train_linear, train_nb, DatasetSchema, Label, LabelMap, LinearKind, TrainConfig,
};

use crate::config::FileConfig;
use crate::{Cli, CliError, Command};

pub fn run(cli: Cli) -> Result<(), CliError> {
    let file_config = FileConfig::load(cli.config.as_deref())?;
    let json = cli.json;
    match cli.command {
        Command::Stats { data, schema } => stats(&data, &schema.resolve(&file_config.data), json),
        Command::Train {
            data,
            model,
            out,
            test_fraction,
            enforce_baseline,
            dataset_name,
            timestamp,
            schema,
            pipeline,
            features,
            train,
        } => {
            let schema = schema.resolve(&file_config.data);
            let (pipeline_config, stopword_file) = pipeline.resolve(&file_config.pipeline);
            let (feature_config, min_df, max_features) = features.resolve(&file_config.features)?;
            let (train_config, alpha) = train.resolve(&file_config.train);
            let test_fraction = test_fraction
                .or(file_config.train.test_fraction)
                .unwrap_or(0.0);
            let model_kind = parse_model(&model)?;
            train_command(TrainRequest {
                data,
                schema,
                pipeline_config,
                stopword_file,
                feature_config,
                min_df,
                max_features,
                train_config,
                alpha,
                model_kind,
                out,
                test_fraction,
                enforce_baseline,
                dataset_name,
                timestamp,
                json,
            })
        }
        Command::Evaluate {
            bundle,
            data,
            enforce_baseline,
            out,
            schema,
        } => evaluate_command(
            &bundle,
            &data,
            &schema.resolve(&file_config.data),
            enforce_baseline,
            out.as_deref(),
            json,
        ),
        Command::Predict {
            bundle,
            text,
            data,
            schema,
        } => predict_command(
            &bundle,
            text.as_deref(),
            data.as_deref(),
            &schema.resolve(&file_config.data),
            json,
        ),
        Command::Compare {
            bundles,
            data,
            out,
            schema,
        } => compare_command(
            &bundles,
            &data,
            &schema.resolve(&file_config.data),
            out.as_deref(),
            json,
        ),
        Command::TopTerms {
            data,
            k,
            per_class,
            schema,
            pipeline,
            features,
        } => {
            let schema = schema.resolve(&file_config.data);
            let (pipeline_config, stopword_file) = pipeline.resolve(&file_config.pipeline);
            let (_, min_df, max_features) = features.resolve(&file_config.features)?;
            top_terms_command(
                &data,
                &schema,
                pipeline_config,
                stopword_file.as_deref(),
                min_df,
                max_features,
                k,
                per_class,
                json,
            )
        }
    }
}

fn parse_model(value: &str) -> Result<Option<LinearKind>, CliError> {
    match value {
        "nb" => Ok(None),
        "svm" => Ok(Some(LinearKind::Svm)),
        "pa" => Ok(Some(LinearKind::Pa)),
        "lr" => Ok(Some(LinearKind::Lr)),
        other => Err(CliError::Usage(format!(
            "unknown model '{other}' (expected nb, svm, pa, or lr)"
        ))),
    }
}

fn load_corpus(path: &Path, schema: &DatasetSchema) -> Result<(Corpus, usize), CliError> {
    let (corpus, load_stats) = load_dataset(path, schema, &LabelMap::default())?;
    Ok((corpus, load_stats.dropped_empty))
}

fn build_preprocessor(
    config: veridict_core::PipelineConfig,
    stopword_file: Option<&Path>,
) -> Result<Preprocessor, CliError> {
    match stopword_file {
        Some(path) => {
            let id = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("custom")
                .to_string();
            let list = StopwordList::from_file(&id, path)?;
            Ok(Preprocessor::with_stopwords(config, list))
        }
        None => Ok(Preprocessor::new(config)?),
    }
}

/// Writes to `--out` when given, stdout otherwise.
fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Data(veridict_core::Error::Bundle(e.to_string())))?;
    text.push('\n');
    Ok(text)
}

fn stats(path: &Path, schema: &DatasetSchema, json: bool) -> Result<(), CliError> {
    let (corpus, dropped) = load_corpus(path, schema)?;
    let dist = class_distribution(&corpus)?;
    if json {
        #[derive(Serialize)]
        struct Stats {
            dataset: String,
            fake: usize,
            real: usize,
            total: usize,
            dropped_empty_rows: usize,
        }
        let text = to_json(&Stats {
            dataset: corpus.source_name().to_string(),
            fake: dist.fake,
            real: dist.real,
            total: dist.total(),
            dropped_empty_rows: dropped,
        })?;
        emit(&text, None)
    } else {
        let mut out = Vec::new();
        writeln!(out, "dataset: {}", corpus.source_name())?;
        format_distribution(&dist, &mut out)?;
        if dropped > 0 {
            writeln!(out, "note: dropped {dropped} empty rows")?;
        }
        emit(std::str::from_utf8(&out).expect("utf8 table"), None)
    }
}

struct TrainRequest {
    data: PathBuf,
    schema: DatasetSchema,
    pipeline_config: veridict_core::PipelineConfig,
    stopword_file: Option<PathBuf>,
    feature_config: veridict_core::FeatureConfig,
    min_df: usize,
    max_features: Option<usize>,
    train_config: TrainConfig,
    alpha: f64,
    model_kind: Option<LinearKind>,
    out: PathBuf,
    test_fraction: f64,
    enforce_baseline: bool,
    dataset_name: Option<String>,
    timestamp: Option<String>,
    json: bool,
}

fn train_command(request: TrainRequest) -> Result<(), CliError> {
    let (corpus, _) = load_corpus(&request.data, &request.schema)?;
    let dataset_name = request
        .dataset_name
        .unwrap_or_else(|| corpus.source_name().to_string());

    let (train_corpus, holdout) = if request.test_fraction > 0.0 {
        let (fit, held) = split(
            &corpus,
            &SplitSpec {
                test_fraction: request.test_fraction,
                seed: request.train_config.seed,
                stratified: true,
            },
        )?;
        (fit, Some(held))
    } else {
        (corpus, None)
    };

    let preprocessor = build_preprocessor(
        request.pipeline_config.clone(),
        request.stopword_file.as_deref(),
    )?;
    let docs: Vec<Vec<String>> = train_corpus
        .iter()
        .map(|a| preprocessor.run(&a.text()))
        .collect();
    let vocabulary = build_vocabulary(&docs, request.min_df, request.max_features)?;
    let matrix = vectorize(&docs, &vocabulary);
    let tfidf = match request.feature_config.representation {
        Representation::Tfidf => Some(fit_idf(&matrix, &vocabulary)?),
        Representation::Counts => None,
    };
    let features = featurize(&matrix, tfidf.as_ref(), &request.feature_config)?;
    let labels = train_corpus.labels()?;
    let classifier = match request.model_kind {
        None => ClassifierModel::NaiveBayes(train_nb(&features, &labels, request.alpha)?),
        Some(kind) => ClassifierModel::Linear(train_linear(
            kind,
            &features,
            &labels,
            &request.train_config,
        )?),
    };

    let created_at = request
        .timestamp
        .unwrap_or_else(|| Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true));
    let stopwords = preprocessor
        .stopwords()
        .map(|list| list.words().map(str::to_string).collect());
    let bundle = ModelBundle::new(BundlePayload {
        pipeline: request.pipeline_config,
        stopwords,
        feature_config: request.feature_config,
        vocabulary,
        tfidf,
        classifier,
        provenance: Provenance {
            dataset_name,
            seed: request.train_config.seed,
            train_config: request.train_config,
            created_at,
        },
    })?;
    bundle.save(&request.out)?;

    let evaluation = match &holdout {
        Some(held) => Some(evaluate(&bundle, held)?),
        None => None,
    };

    if request.json {
        #[derive(Serialize)]
        struct TrainSummary<'a> {
            bundle_path: String,
            checksum: &'a str,
            classifier: &'a str,
            trained_on: usize,
            vocabulary_size: usize,
            holdout: Option<&'a Evaluation>,
        }
        let text = to_json(&TrainSummary {
            bundle_path: request.out.display().to_string(),
            checksum: bundle.checksum(),
            classifier: bundle.payload().classifier.kind_name(),
            trained_on: train_corpus.len(),
            vocabulary_size: bundle.payload().vocabulary.len(),
            holdout: evaluation.as_ref(),
        })?;
        emit(&text, None)?;
    } else {
        let mut out = String::new();
        out.push_str(&format!(
            "trained {} on {} articles ({} terms)\n",
            bundle.payload().classifier.kind_name(),
            train_corpus.len(),
            bundle.payload().vocabulary.len()
        ));
        out.push_str(&format!(
            "bundle saved to {} ({})\n",
            request.out.display(),
            bundle.checksum()
        ));
        if let Some(evaluation) = &evaluation {
            out.push('\n');
            out.push_str(&format_report(&evaluation.report));
        }
        emit(&out, None)?;
    }

    if request.enforce_baseline {
        if let Some(evaluation) = &evaluation {
            if !evaluation.baseline_passed {
                return Err(CliError::Baseline {
                    accuracy: evaluation.report.accuracy,
                });
            }
        }
    }
    Ok(())
}

fn evaluate_command(
    bundle_path: &Path,
    data: &Path,
    schema: &DatasetSchema,
    enforce_baseline: bool,
    out: Option<&Path>,
    json: bool,
) -> Result<(), CliError> {
    let bundle = ModelBundle::load(bundle_path)?;
    let (corpus, _) = load_corpus(data, schema)?;
    let evaluation = evaluate(&bundle, &corpus)?;
    let text = if json {
        to_json(&evaluation)?
    } else {
        format_report(&evaluation.report)
    };
    emit(&text, out)?;
    if enforce_baseline && !evaluation.baseline_passed {
        return Err(CliError::Baseline {
            accuracy: evaluation.report.accuracy,
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct PredictRecord {
    id: String,
    label: Label,
    score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    probability: Option<f64>,
    retained_tokens: Vec<String>,
    oov_count: usize,
    used_fallback: bool,
}

fn predict_command(
    bundle_path: &Path,
    text: Option<&str>,
    data: Option<&Path>,
    schema: &DatasetSchema,
    json: bool,
) -> Result<(), CliError> {
    let bundle = ModelBundle::load(bundle_path)?;

    // Input precedence: --text, then --data, then stdin lines.
    let inputs: Vec<(String, String)> = if let Some(text) = text {
        vec![("text-1".to_string(), text.to_string())]
    } else if let Some(path) = data {
        let (corpus, _) = load_corpus(path, schema)?;
        corpus.iter().map(|a| (a.id.clone(), a.text())).collect()
    } else {
        let stdin = std::io::stdin().lock();
        let mut lines = Vec::new();
        for (index, line) in stdin.lines().enumerate() {
            let line = line?;
            if !line.trim().is_empty() {
                lines.push((format!("line-{}", index + 1), line));
            }
        }
        lines
    };
    if inputs.is_empty() {
        return Err(CliError::Usage(
            "no input to classify: pass --text, --data, or non-empty stdin lines".to_string(),
        ));
    }

    let mut records = Vec::with_capacity(inputs.len());
    for (id, input_text) in &inputs {
        let outcome = bundle.predict_text(input_text)?;
        if outcome.diagnostics.used_fallback {
            eprintln!(
                "warning: '{id}' had no usable tokens; label is the model's fallback decision"
            );
        }
        records.push(PredictRecord {
            id: id.clone(),
            label: outcome.prediction.label,
            score: outcome.prediction.score,
            probability: outcome.prediction.probability,
            retained_tokens: outcome.diagnostics.retained_tokens,
            oov_count: outcome.diagnostics.oov_count,
            used_fallback: outcome.diagnostics.used_fallback,
        });
    }

    if json {
        emit(&to_json(&records)?, None)
    } else {
        let mut out = String::new();
        for r in &records {
            out.push_str(&format!("{}\t{}\t{:+.6}\n", r.id, r.label, r.score));
        }
        emit(&out, None)
    }
}

fn compare_command(
    bundle_paths: &[PathBuf],
    data: &Path,
    schema: &DatasetSchema,
    out: Option<&Path>,
    json: bool,
) -> Result<(), CliError> {
    let mut bundles = Vec::with_capacity(bundle_paths.len());
    for path in bundle_paths {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("bundle")
            .to_string();
        let name = if bundles.iter().any(|(n, _)| *n == name) {
            format!("{name}#{}", bundles.len() + 1)
        } else {
            name
        };
        bundles.push((name, ModelBundle::load(path)?));
    }
    let (corpus, _) = load_corpus(data, schema)?;
    let grid = compare(&bundles, &corpus)?;
    let text = if json {
        to_json(&grid)?
    } else {
        format_compare(&grid)
    };
    emit(&text, out)
}

#[allow(clippy::too_many_arguments)]
fn top_terms_command(
    data: &Path,
    schema: &DatasetSchema,
    pipeline_config: veridict_core::PipelineConfig,
    stopword_file: Option<&Path>,
    min_df: usize,
    max_features: Option<usize>,
    k: usize,
    per_class: bool,
    json: bool,
) -> Result<(), CliError> {
    let (corpus, _) = load_corpus(data, schema)?;
    let preprocessor = build_preprocessor(pipeline_config, stopword_file)?;
    let docs: Vec<Vec<String>> = corpus.iter().map(|a| preprocessor.run(&a.text())).collect();
    let vocabulary = build_vocabulary(&docs, min_df, max_features)?;
    let matrix = vectorize(&docs, &vocabulary);

    fn render(entries: &[TermCount]) -> String {
        let width = entries.iter().map(|t| t.term.len()).max().unwrap_or(4);
        entries
            .iter()
            .map(|t| format!("{:<width$}  {}\n", t.term, t.count))
            .collect()
    }

    if per_class {
        let labels = corpus.labels()?;
        let by_class = top_terms_per_class(&matrix, &vocabulary, &labels, k)?;
        if json {
            emit(&to_json(&by_class)?, None)
        } else {
            let mut out = String::new();
            for (label, entries) in &by_class {
                out.push_str(&format!("{label}\n"));
                out.push_str(&render(entries));
                out.push('\n');
            }
            emit(&out, None)
        }
    } else {
        let entries = top_terms(&matrix, &vocabulary, k);
        if json {
            emit(&to_json(&entries)?, None)
        } else {
            emit(&render(&entries), None)
        }
    }
}
