use rankdec::analysis::{report_with, AlgCaseRule, ParamSet, PolyFactor, WorkFactorReport};

use crate::args::{AlgRule, AnalyzeArgs, CombPoly, Format};
use crate::{emit, read_file, CliError, CliResult};

/// Fixed CSV/table columns, in order.
pub const COLUMNS: [&str; 17] = [
    "q",
    "m",
    "n",
    "k",
    "w",
    "W_RD",
    "delta_star",
    "W_RD_lower",
    "W_RD_upper",
    "W_Comb",
    "W_Comb_over_N",
    "W_PQComb",
    "W_PQComb_over_N",
    "W_Alg",
    "W_Key",
    "success_prob",
    "N",
];

fn params_from_args(a: &AnalyzeArgs) -> CliResult<Vec<ParamSet>> {
    if let Some(path) = &a.batch {
        let text = read_file(path)?;
        return parse_batch(&text);
    }
    match (a.m, a.n, a.k, a.w) {
        (Some(m), Some(n), Some(k), Some(w)) => Ok(vec![ParamSet::new(a.q, m, n, k, w)?]),
        _ => Err(CliError::Usage("analyze needs --m --n --k --w or --batch".into())),
    }
}

pub fn parse_batch(text: &str) -> CliResult<Vec<ParamSet>> {
    let sets: Vec<ParamSet> =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed batch file: {e}")))?;
    if sets.is_empty() {
        return Err(CliError::Usage("batch file holds no parameter sets".into()));
    }
    for p in &sets {
        p.validate()?;
    }
    Ok(sets)
}

pub fn analyze(sets: &[ParamSet], poly: CombPoly, rule: AlgRule) -> CliResult<Vec<WorkFactorReport>> {
    let poly = match poly {
        CombPoly::Cubic => PolyFactor::Cubic,
        CombPoly::None => PolyFactor::Neglected,
    };
    let rule = match rule {
        AlgRule::Reference => AlgCaseRule::Reference,
        AlgRule::AsPrinted => AlgCaseRule::AsPrinted,
    };
    sets.iter()
        .map(|p| report_with(p, poly, rule).map_err(CliError::from))
        .collect()
}

fn cells(r: &WorkFactorReport) -> Vec<String> {
    let p = &r.params;
    let v = &r.log2;
    let f = |x: f64| format!("{x:.4}");
    let opt = |x: Option<f64>| x.map(f).unwrap_or_default();
    vec![
        p.q.to_string(),
        p.m.to_string(),
        p.n.to_string(),
        p.k.to_string(),
        p.w.to_string(),
        opt(v.w_rd),
        v.delta_star.map(|d| d.to_string()).unwrap_or_default(),
        opt(v.w_rd_lower),
        opt(v.w_rd_upper),
        f(v.w_comb),
        f(v.w_comb_over_n),
        f(v.w_pq_comb),
        f(v.w_pq_comb_over_n),
        f(v.w_alg),
        opt(v.w_key),
        opt(v.success_prob),
        f(v.n),
    ]
}

pub fn render(reports: &[WorkFactorReport], format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS)?;
            for r in reports {
                w.write_record(cells(r))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = reports.iter().map(cells).collect();
            let widths: Vec<usize> = (0..COLUMNS.len())
                .map(|c| rows.iter().map(|r| r[c].len()).chain([COLUMNS[c].len()]).max().unwrap())
                .collect();
            let line = |row: &[String]| {
                let padded: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            let header: Vec<String> = COLUMNS.iter().map(|s| s.to_string()).collect();
            Ok(std::iter::once(&header).chain(&rows).map(|r| line(r)).collect())
        }
    }
}

pub fn cmd_analyze(a: &AnalyzeArgs) -> CliResult<Vec<WorkFactorReport>> {
    let sets = params_from_args(a)?;
    let reports = analyze(&sets, a.comb_poly, a.alg_rule)?;
    log::info!("analyzed {} parameter set(s)", reports.len());
    emit(&render(&reports, a.format)?, a.out.as_deref())?;
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row1() -> Vec<ParamSet> {
        vec![ParamSet::new(2, 24, 24, 16, 6).unwrap()]
    }

    #[test]
    fn batch_parsing() {
        let sets = parse_batch(r#"[{"q":2,"m":24,"n":24,"k":16,"w":6},{"q":2,"m":64,"n":64,"k":32,"w":19}]"#).unwrap();
        assert_eq!(sets.len(), 2);
        assert!(parse_batch("[]").is_err());
        assert!(parse_batch(r#"[{"q":2,"m":24,"n":24,"k":16}]"#).is_err());
        assert!(matches!(
            parse_batch(r#"[{"q":4,"m":24,"n":24,"k":16,"w":6}]"#),
            Err(CliError::Core(_))
        ));
    }

    #[test]
    fn json_output_parses_back() {
        let reports = analyze(&row1(), CombPoly::Cubic, AlgRule::Reference).unwrap();
        let text = render(&reports, Format::Json).unwrap();
        let back: Vec<WorkFactorReport> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, reports);
        assert_eq!(back[0].log2.delta_star, Some(4));
    }

    #[test]
    fn csv_has_fixed_header() {
        let reports = analyze(&row1(), CombPoly::Cubic, AlgRule::Reference).unwrap();
        let text = render(&reports, Format::Csv).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), COLUMNS);
        let rec = rd.records().next().unwrap().unwrap();
        assert_eq!(&rec[6], "4");
        assert!((rec[10].parse::<f64>().unwrap() - 38.99).abs() < 0.05);
    }

    #[test]
    fn table_is_aligned() {
        let reports = analyze(&row1(), CombPoly::None, AlgRule::AsPrinted).unwrap();
        let text = render(&reports, Format::Table).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].len(), lines[1].len());
        assert!(lines[0].starts_with('q'));
    }
}
