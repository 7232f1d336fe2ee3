//! Machine-readable reports: JSON and CSV.
//!
//! Schema: `{id, profile: {...}, surfaces: [{ray, rho, gamma2, form}],
//! verdict, witness}` with `gamma2` an exact fraction string (`"p/q"` or an
//! integer string), never a float. `ray` is a generator index, or the
//! string `"whole"` for a 2-dimensional variety.

use serde_json::{json, Value};

use crate::classify::{SweepOutcome, VarietyReport};
use crate::error::Error;
use crate::intersection::Surface;

fn surface_value(s: Surface) -> Value {
    match s {
        Surface::Whole => json!("whole"),
        Surface::Ray(r) => json!(r),
    }
}

pub fn report_to_json(report: &VarietyReport) -> Value {
    json!({
        "id": report.id,
        "profile": report.profile,
        "surfaces": report.surfaces.iter().map(|s| json!({
            "ray": surface_value(s.surface),
            "rho": s.rho,
            "gamma2": s.gamma2.to_string(),
            "form": s.form,
        })).collect::<Vec<Value>>(),
        "verdict": report.verdict,
        "witness": surface_value(report.witness),
    })
}

pub fn sweep_to_json(outcome: &SweepOutcome) -> Value {
    let reports: Vec<Value> = outcome
        .reports
        .iter()
        .map(|(id, r)| match r {
            Ok(rep) => report_to_json(rep),
            Err(e) => json!({"id": id, "error": e.to_string()}),
        })
        .collect();
    json!({
        "reports": reports,
        "summary": outcome.summary,
    })
}

const CSV_HEADER: &str =
    "id,verdict,witness,min_gamma2,picard,q_factorial,complete,fano,terminal,gorenstein,error";

pub fn sweep_to_csv(outcome: &SweepOutcome) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (id, r) in &outcome.reports {
        match r {
            Ok(rep) => {
                let p = &rep.profile;
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},\n",
                    rep.id,
                    rep.verdict,
                    surface_csv(rep.witness),
                    rep.witness_value(),
                    p.picard,
                    p.q_factorial,
                    p.complete,
                    p.fano,
                    p.terminal,
                    p.gorenstein,
                ));
            }
            Err(e) => {
                out.push_str(&format!("{},,,,,,,,,,\"{}\"\n", id, csv_escape(e)));
            }
        }
    }
    out
}

fn surface_csv(s: Surface) -> String {
    match s {
        Surface::Whole => "whole".to_string(),
        Surface::Ray(r) => format!("ray{r}"),
    }
}

fn csv_escape(e: &Error) -> String {
    e.to_string().replace('"', "\"\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{sweep, verdict};
    use crate::fan::lv;

    #[test]
    fn json_schema_fields() {
        let rep = verdict("P2", &[lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])]).unwrap();
        let v = report_to_json(&rep);
        assert_eq!(v["id"], "P2");
        assert_eq!(v["verdict"], "gamma2-positive");
        assert_eq!(v["surfaces"][0]["ray"], "whole");
        assert_eq!(v["surfaces"][0]["gamma2"], "3");
        assert_eq!(v["profile"]["picard"], 1);
        assert_eq!(v["witness"], "whole");
    }

    #[test]
    fn gamma_values_serialize_as_fractions() {
        let rep = verdict(
            "ex",
            &[lv(&[1, 0]), lv(&[1, 2]), lv(&[-1, 2]), lv(&[-1, -1])],
        )
        .unwrap();
        let v = report_to_json(&rep);
        assert_eq!(v["surfaces"][0]["gamma2"], "5/6");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let entries = vec![("P2".to_string(), vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])])];
        let out = sweep(&entries, 1);
        let csv = sweep_to_csv(&out);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let row = lines.next().unwrap();
        assert!(row.starts_with("P2,gamma2-positive,whole,3,1,true,true,true,"));
    }
}
