mod common;

use std::fs;
use std::path::Path;
use std::process::Output;
use std::time::{Duration, Instant};

use common::{path_arg, run};
use paiforge::datastore::{load_bundle, read_jsonl, save_bundle, DECISIONS_FILE};
use paiforge::oracle::TaggingDecision;
use serde_json::{json, Value};

fn ok(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}\nstderr: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn mock(args: &[&str]) -> Output {
    let mut all = vec!["--mock", "--seed", "7"];
    all.extend_from_slice(args);
    run(&all)
}

fn pipeline(dir: &Path) {
    ok(&mock(&["pipeline", "--out", &path_arg(dir), "--profiles", "6", "--threads", "2"]));
}

#[test]
fn no_arguments_prints_help() {
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["--seed", "abc", "validate", "--dataset", "x"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["stats", "--dataset", "x", "--table", "nope"]).status.code(), Some(2));
}

#[test]
fn missing_dataset_exits_1_with_integrity_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = mock(&["evaluate", "--dataset", &path_arg(&tmp.path().join("absent"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("IntegrityError"), "{}", stderr(&o));
}

#[test]
fn pipeline_is_deterministic_and_valid() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let out = ok(&mock(&["pipeline", "--out", &path_arg(&a), "--profiles", "4", "--threads", "1"]));
    assert!(out.contains("comments"), "{out}");
    ok(&mock(&["pipeline", "--out", &path_arg(&b), "--profiles", "4", "--threads", "1"]));
    assert_eq!(common::bundle_files(&a), common::bundle_files(&b));
    ok(&run(&["validate", "--dataset", &path_arg(&a)]));
}

#[test]
fn step_by_step_workflow() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().join("ds");
    let ds = path_arg(&d);

    ok(&mock(&["generate-profiles", "--out", &ds, "--count", "6"]));
    let b = load_bundle(&d).unwrap();
    assert_eq!(b.profiles.len(), 6);
    assert!(b.profiles.iter().all(|p| !p.writing_style.is_empty()));
    assert!(b.threads.is_empty());

    ok(&mock(&["simulate", "--dataset", &ds, "--threads", "2", "--attribute", "age", "--attribute", "sex", "--oracle", "off"]));
    let b = load_bundle(&d).unwrap();
    assert_eq!(b.threads.len(), 2);
    assert!(b.threads.iter().flat_map(|t| t.comments()).all(|c| c.tags.is_empty()));

    ok(&mock(&["tag", "--dataset", &ds]));
    let b = load_bundle(&d).unwrap();
    assert!(b.threads.iter().flat_map(|t| t.comments()).any(|c| !c.tags.is_empty()));

    ok(&mock(&["aggregate", "--dataset", &ds, "--source", "model"]));
    let b = load_bundle(&d).unwrap();
    assert_eq!(b.labels.len(), 6);

    let text = ok(&mock(&["evaluate", "--dataset", &ds]));
    assert!(text.contains("overall"), "{text}");
    let report = tmp.path().join("report.json");
    let json_out = ok(&mock(&["evaluate", "--dataset", &ds, "--anonymized", "--format", "json", "--out", &path_arg(&report)]));
    let v: Value = serde_json::from_str(&json_out).unwrap();
    assert_eq!(v["anonymized"], true);
    assert_eq!(v, serde_json::from_str::<Value>(&fs::read_to_string(&report).unwrap()).unwrap());

    ok(&run(&["validate", "--dataset", &ds]));
}

#[test]
fn simulate_replaces_threads_and_clears_reviews() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().join("ds");
    pipeline(&d);
    let mut b = load_bundle(&d).unwrap();
    let t = &b.threads[0];
    let c = t.comments().find(|c| !c.tags.is_empty()).expect("tagged comment");
    b.decisions.push(TaggingDecision {
        thread_id: t.id.clone(),
        comment_id: c.id,
        attribute: c.tags[0].attribute,
        action: paiforge::oracle::DecisionAction::Reject,
        edited_guesses: None,
        hardness_fine: None,
        certainty: None,
        labeler: "L".into(),
        timestamp: common::at_minute(0),
    });
    save_bundle(&b, &d).unwrap();
    ok(&mock(&["simulate", "--dataset", &path_arg(&d), "--threads", "1"]));
    let b = load_bundle(&d).unwrap();
    assert_eq!(b.threads.len(), 1);
    assert!(b.decisions.is_empty());
    assert!(b.labels.is_empty());
}

#[test]
fn stats_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().join("ds");
    pipeline(&d);
    let ds = path_arg(&d);

    let thread = ok(&mock(&["stats", "--dataset", &ds]));
    assert!(thread.contains("comment_length"), "{thread}");
    let csv = ok(&mock(&["stats", "--dataset", &ds, "--format", "csv"]));
    assert!(csv.lines().next().unwrap().contains(','));
    let v: Value = serde_json::from_str(&ok(&mock(&["stats", "--dataset", &ds, "--format", "json"]))).unwrap();
    assert_eq!(v["threads"], 2);

    let hardness = ok(&mock(&["stats", "--dataset", &ds, "--table", "hardness", "--level", "comment", "--format", "csv"]));
    assert_eq!(hardness.lines().count(), 9, "{hardness}");
    ok(&mock(&["stats", "--dataset", &ds, "--table", "agreement"]));
    ok(&mock(&["stats", "--dataset", &ds, "--table", "topics"]));

    let judgments = tmp.path().join("judgments.jsonl");
    let rows: Vec<String> = [("a", "synthetic", "human", "r1"), ("a", "synthetic", "synthetic", "r2"), ("b", "human", "human", "r1"), ("b", "human", "human", "r2")]
        .iter()
        .map(|(c, t, j, r)| json!({"comment_id": c, "source_truth": t, "judged_as": j, "rater_id": r}).to_string())
        .collect();
    fs::write(&judgments, rows.join("\n")).unwrap();
    let study: Value = serde_json::from_str(&ok(&mock(&[
        "stats", "--dataset", &ds, "--table", "humanstudy", "--judgments", &path_arg(&judgments), "--format", "json",
    ])))
    .unwrap();
    assert_eq!(study["accuracy"], 0.75);
    let o = mock(&["stats", "--dataset", &ds, "--table", "humanstudy"]);
    assert_eq!(o.status.code(), Some(1), "judgments are required");
}

#[test]
fn import_published_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("published");
    fs::create_dir(&src).unwrap();
    let profile = json!({"age": 30, "sex": "female", "city_country": "Paris, France", "birth_city_country": "Lyon, France",
        "education": "Masters in Law", "occupation": "lawyer", "income": "70 thousand euros", "income_level": "high",
        "relationship_status": "single", "style": "terse"});
    let rows = [
        json!({"id": "a", "thread_id": "T1", "parent_id": null, "author": "AaBb", "text": "root", "profile": profile, "feature": "age"}),
        json!({"id": "b", "thread_id": "T1", "parent_id": "a", "author": "CcDd", "text": "paris rocks", "profile": profile,
               "guesses": [{"feature": "city_country", "guesses": ["Paris, France"], "hardness": "direct", "certainty": 4}],
               "reviews": {"human": {"city_country": {"estimate": "paris, france", "hardness": 1, "certainty": 5}}}}),
    ];
    let body: Vec<String> = rows.iter().map(Value::to_string).collect();
    fs::write(src.join("synthpai.jsonl"), body.join("\n")).unwrap();
    let out = tmp.path().join("bundle");
    let text = ok(&run(&["import", "--from", &path_arg(&src), "--out", &path_arg(&out)]));
    assert!(text.contains("comments"), "{text}");
    let b = load_bundle(&out).unwrap();
    assert_eq!(b.threads.len(), 1);
    assert_eq!(b.comment_count(), 2);
    ok(&run(&["validate", "--dataset", &path_arg(&out)]));

    let bad = tmp.path().join("bad");
    fs::create_dir(&bad).unwrap();
    fs::write(bad.join("synthpai.jsonl"), r#"{"uid": 1}"#).unwrap();
    let o = run(&["import", "--from", &path_arg(&bad), "--out", &path_arg(&tmp.path().join("x"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validate_reports_corruption() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().join("ds");
    pipeline(&d);
    fs::write(d.join("threads.jsonl"), "{broken\n").unwrap();
    let o = run(&["validate", "--dataset", &path_arg(&d)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("threads.jsonl"), "{}", stderr(&o));
}

#[test]
fn config_file_overrides_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, "seed = 11\n[simulation]\nno_rounds = 1\nno_threads = 1\n").unwrap();
    let d = tmp.path().join("ds");
    ok(&run(&["--mock", "--config", &path_arg(&cfg), "pipeline", "--out", &path_arg(&d), "--profiles", "3", "--threads", "1"]));
    let b = load_bundle(&d).unwrap();
    assert_eq!(b.manifest.seed, 11);
    assert!(b.threads[0].comments().all(|c| c.round == 1));
}

#[test]
fn serve_review_answers_over_http() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().join("ds");
    pipeline(&d);
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let mut child = common::bin()
        .args(["serve-review", "--dataset", &path_arg(&d), "--port", &port.to_string(), "--token", "tok"])
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .spawn()
        .unwrap();
    let rt = tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap();
    let outcome = rt.block_on(async {
        let client = reqwest::Client::new();
        let base = format!("http://127.0.0.1:{port}");
        let deadline = Instant::now() + Duration::from_secs(20);
        let resp = loop {
            match client.get(format!("{base}/progress")).bearer_auth("tok").send().await {
                Ok(r) => break r,
                Err(e) if Instant::now() >= deadline => return Err(e.to_string()),
                Err(_) => tokio::time::sleep(Duration::from_millis(100)).await,
            }
        };
        let status = resp.status().as_u16();
        let progress: Value = resp.json().await.map_err(|e| e.to_string())?;
        let unauth = client.get(format!("{base}/queue")).send().await.map_err(|e| e.to_string())?.status().as_u16();
        Ok((status, progress, unauth))
    });
    let _ = child.kill();
    let _ = child.wait();
    let (status, progress, unauth) = outcome.unwrap();
    assert_eq!(status, 200);
    assert!(progress["total"].as_u64().unwrap() > 0);
    assert_eq!(unauth, 401);
    let decisions: Vec<TaggingDecision> = read_jsonl(&d.join(DECISIONS_FILE)).unwrap();
    assert!(decisions.is_empty());
}

#[test]
fn serve_review_without_dataset_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["serve-review", "--dataset", &path_arg(&tmp.path().join("none")), "--port", "0"]);
    assert_eq!(o.status.code(), Some(1));
}
