use rankone_ps::group::Model;
use rankone_ps::verify::{
    emit_report, run_suite, AtomSpec, ReportFormat, RunOptions, SuiteConfig, SuiteName, SymbolName, SymbolSpec, VerificationReport, CSV_COLUMNS,
    SCHEMA_VERSION,
};

#[test]
fn empty_report_is_valid() {
    let cfg = SuiteConfig::new(Model::H2, SuiteName::Iwasawa);
    let r = VerificationReport::new(&cfg, Vec::new());
    assert_eq!(r.summary.total, 0);
    assert!(r.summary.pass);
    let json = r.to_json().unwrap();
    assert!(json.contains("\"schema_version\": 1"));
    assert_eq!(VerificationReport::from_json(&json).unwrap(), r);
    let csv = r.to_csv().unwrap();
    assert_eq!(csv.trim_end(), CSV_COLUMNS.join(","));

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.json");
    emit_report(&r, ReportFormat::Json, Some(&p)).unwrap();
    assert_eq!(VerificationReport::from_json(&std::fs::read_to_string(&p).unwrap()).unwrap(), r);
}

#[test]
fn config_roundtrips_through_echo() {
    let mut cfg = SuiteConfig::new(Model::H3, SuiteName::IntertwiningOffdiag);
    cfg.lambda_grid = vec![1.0, 2.5];
    cfg.seed = 42;
    cfg.symbol = SymbolSpec { name: SymbolName::WindowTrig, center: [0.1, -0.2, 1.1], ..SymbolSpec::default() };
    cfg.atoms = vec![AtomSpec { weight: [1.0, 0.5], angle: None, polar: Some(0.4), azimuth: Some(1.0) }];
    cfg.tolerances.quad_rel = Some(1e-9);
    let text = cfg.to_toml().unwrap();
    assert_eq!(SuiteConfig::parse(&text).unwrap(), cfg);

    let small = SuiteConfig::parse("model = \"h2\"\nsuite = \"bracket\"\nsamples = 20\n").unwrap();
    let report = run_suite(&small, &RunOptions { parallelism: Some(1), timestamp: false }).unwrap();
    assert_eq!(report.schema_version, SCHEMA_VERSION);
    let echoed = VerificationReport::from_json(&report.to_json().unwrap()).unwrap().config_echo;
    assert_eq!(echoed, small);
    assert_eq!(SuiteConfig::parse(&echoed.to_toml().unwrap()).unwrap(), small);
}

#[test]
fn invalid_configs_rejected() {
    for text in [
        "model = \"h4\"\nsuite = \"bracket\"\n",
        "model = \"h2\"\nsuite = \"bracket\"\nparallelism = 0\n",
        "model = \"h2\"\nsuite = \"bracket\"\n[tolerances]\ncheck = -1.0\n",
        "model = \"h2\"\nsuite = \"bracket\"\n[symbol]\nname = \"bump\"\ncenter = [0.0, 0.3, 1.0]\n",
        "model = \"h2\"\nsuite = \"bracket\"\n[[atoms]]\npolar = 1.0\nazimuth = 0.0\n",
        "model = \"h3\"\nsuite = \"bracket\"\n[[atoms]]\nangle = 1.0\n",
        "model = \"h2\"\nsuite = \"bracket\"\nlambda_grid = [nan]\n",
    ] {
        assert!(SuiteConfig::parse(text).is_err(), "{text}");
    }
}

#[test]
fn case_errors_become_failed_rows() {
    // coincident configured atoms make every pairing hit the diagonal
    let cfg = SuiteConfig::parse(
        "model = \"h2\"\nsuite = \"intertwining-diagonal\"\nlambda_grid = [1.0]\n\
         [[atoms]]\nangle = 0.5\n[[atoms_k]]\nangle = 0.5\n",
    )
    .unwrap();
    let r = run_suite(&cfg, &RunOptions::default()).unwrap();
    assert!(!r.passed());
    assert!(r.cases.iter().all(|c| !c.pass && c.note.as_deref().unwrap_or("").starts_with("error:")));
}
