use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl VerdictEntry {
    pub fn new(verdict: &str, detail: Option<String>) -> Self {
        VerdictEntry {
            verdict: verdict.to_string(),
            detail,
        }
    }

    pub fn yes_no(ok: bool) -> Self {
        VerdictEntry::new(if ok { "yes" } else { "no" }, None)
    }
}

/// Output of one command. Entries keep insertion order, which the commands
/// fix, so rendering is deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub command: String,
    #[serde(default)]
    pub expressions: IndexMap<String, String>,
    #[serde(default)]
    pub verdicts: IndexMap<String, VerdictEntry>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl RunResult {
    pub fn new(command: &str) -> Self {
        RunResult {
            command: command.to_string(),
            ..RunResult::default()
        }
    }

    pub fn expression(&mut self, name: impl Into<String>, value: impl ToString) {
        self.expressions.insert(name.into(), value.to_string());
    }

    pub fn verdict(&mut self, name: impl Into<String>, entry: VerdictEntry) {
        self.verdicts.insert(name.into(), entry);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn render(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (name, value) in &self.expressions {
            out.push_str(&format!("{name} = {value}\n"));
        }
        for (name, v) in &self.verdicts {
            match &v.detail {
                Some(d) => out.push_str(&format!("{name}: {}, {d}\n", v.verdict)),
                None => out.push_str(&format!("{name}: {}\n", v.verdict)),
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<RunResult, serde_json::Error> {
        serde_json::from_str(text)
    }
}
