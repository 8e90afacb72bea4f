use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Named results of one command plus the verdict used for the exit status.
#[derive(Debug, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
    text: Vec<(String, String)>,
    holds: bool,
}

impl Report {
    pub fn new() -> Self {
        Report {
            holds: true,
            ..Report::default()
        }
    }

    /// A field whose text and JSON forms are the same string.
    pub fn field(self, key: &str, value: impl ToString) -> Self {
        let s = value.to_string();
        self.both(key, s.clone(), Value::String(s))
    }

    /// A field shown as `text` in text mode and as `json` in JSON mode.
    pub fn both(mut self, key: &str, text: String, json: Value) -> Self {
        self.text.push((key.to_string(), text));
        self.fields.push((key.to_string(), json));
        self
    }

    pub fn verdict(mut self, key: &str, holds: bool) -> Self {
        self.holds = holds;
        self.both(key, holds.to_string(), Value::Bool(holds))
    }

    pub fn holds(&self) -> bool {
        self.holds
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self
                .text
                .iter()
                .map(|(k, v)| format!("{k} = {v}"))
                .collect::<Vec<_>>()
                .join("\n"),
            Format::Json => {
                let map: Map<String, Value> = self.fields.iter().cloned().collect();
                Value::Object(map).to_string()
            }
        }
    }
}
