//! Sweep reports and their JSON / CSV encodings.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::format_rational;
use crate::rasa::InequalityMargin;

/// Named grid arguments, serialized as a JSON object in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params(pub Vec<(String, String)>);

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Params {
    /// `n=2;x=1/4;y=3/4`
    pub fn compact(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub inequality_id: String,
    pub params: Params,
    pub f: String,
    pub lhs: String,
    pub rhs: String,
    pub margin: String,
    pub holds: bool,
}

impl From<&InequalityMargin> for Record {
    fn from(m: &InequalityMargin) -> Self {
        Self {
            inequality_id: m.inequality_id.clone(),
            params: Params(m.point.iter().map(|(k, v)| (k.clone(), format_rational(v))).collect()),
            f: m.f_id.clone(),
            lhs: format_rational(&m.lhs),
            rhs: format_rational(&m.rhs),
            margin: format_rational(&m.margin),
            holds: m.holds(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    /// Sorts by inequality id, then grid point; ties keep their input order.
    pub fn from_margins(mut margins: Vec<InequalityMargin>) -> Self {
        margins.sort_by(|a, b| {
            a.inequality_id.cmp(&b.inequality_id).then_with(|| {
                let pa = a.point.iter().map(|(_, v)| v);
                let pb = b.point.iter().map(|(_, v)| v);
                pa.cmp(pb)
            })
        });
        let records: Vec<Record> = margins.iter().map(Record::from).collect();
        let failures = records.iter().filter(|r| !r.holds).count();
        Self { summary: Summary { total: records.len(), failures }, records }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.holds)
    }

    pub fn is_clean(&self) -> bool {
        self.summary.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per record with columns
    /// `inequality_id,params,f,lhs,rhs,margin,holds`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Parse(format!("csv encoding failed: {e}"));
        w.write_record(["inequality_id", "params", "f", "lhs", "rhs", "margin", "holds"]).map_err(csv_err)?;
        for r in &self.records {
            w.write_record([
                r.inequality_id.as_str(),
                &r.params.compact(),
                &r.f,
                &r.lhs,
                &r.rhs,
                &r.margin,
                if r.holds { "true" } else { "false" },
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv encoding failed: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::ConvexTestFunction;
    use crate::numerics::{int, ratio};

    fn margin(id: &str, x: i64, lhs: i64, rhs: i64) -> InequalityMargin {
        InequalityMargin::new(
            id,
            vec![("n".into(), int(1)), ("x".into(), ratio(x, 4))],
            &ConvexTestFunction::square(),
            int(lhs),
            int(rhs),
        )
    }

    #[test]
    fn ordering_and_summary() {
        let report = Report::from_margins(vec![margin("b", 3, 0, 1), margin("a", 2, 2, 1), margin("b", 1, 0, 0)]);
        let order: Vec<(&str, &str)> =
            report.records.iter().map(|r| (r.inequality_id.as_str(), r.params.0[1].1.as_str())).collect();
        assert_eq!(order, [("a", "1/2"), ("b", "1/4"), ("b", "3/4")]);
        assert_eq!(report.summary, Summary { total: 3, failures: 1 });
        assert_eq!(report.failures().next().unwrap().margin, "-1/1");
        assert!(!report.is_clean());
    }

    #[test]
    fn encodings() {
        let report = Report::from_margins(vec![margin("rasa", 1, 0, 1)]);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["records"][0]["params"]["x"], "1/4");
        assert_eq!(json["records"][0]["margin"], "1/1");
        assert_eq!(json["summary"]["total"], 1);
        let csv = report.to_csv().unwrap();
        assert_eq!(csv, "inequality_id,params,f,lhs,rhs,margin,holds\nrasa,n=1/1;x=1/4,square,0/1,1/1,1/1,true\n");
    }
}
