//! Generic JSON, CSV and text renderings of serializable results.

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;

/// A result ready to print in any format. Commands with a natural tabular
/// shape supply their own CSV; everything else is flattened from JSON.
pub struct Rendered {
    value: Value,
    csv: Option<String>,
}

impl Rendered {
    pub fn new(result: &impl Serialize) -> Self {
        Rendered {
            value: serde_json::to_value(result).expect("results serialize"),
            csv: None,
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn into_string(self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.value).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.unwrap_or_else(|| csv_of(&self.value)),
            Format::Text => text_of(&self.value),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_rows(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&header).expect("writing to memory");
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is UTF-8")
}

/// Objects become one row; arrays of objects become a table; an object
/// holding exactly one array of objects is rendered as that table.
pub fn csv_of(v: &Value) -> String {
    match v {
        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
            let header: Vec<String> = items[0].as_object().unwrap().keys().cloned().collect();
            let rows = items
                .iter()
                .map(|it| header.iter().map(|k| cell(&it[k.as_str()])).collect())
                .collect();
            write_rows(header, rows)
        }
        Value::Array(items) => items.iter().map(|x| cell(x) + "\n").collect(),
        Value::Object(map) => {
            let tables: Vec<&Value> = map
                .values()
                .filter(|x| matches!(x, Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_object)))
                .collect();
            if let [table] = tables[..] {
                return csv_of(table);
            }
            let header: Vec<String> = map.keys().cloned().collect();
            let row = map.values().map(cell).collect();
            write_rows(header, vec![row])
        }
        scalar => cell(scalar) + "\n",
    }
}

pub fn text_of(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            map.iter()
                .map(|(k, x)| format!("{k:<width$}  {}\n", cell(x)))
                .collect()
        }
        Value::Array(items) => items.iter().map(|x| cell(x) + "\n").collect(),
        scalar => cell(scalar) + "\n",
    }
}
