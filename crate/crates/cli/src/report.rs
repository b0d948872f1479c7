use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
    Refused,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Refused => 2,
        }
    }
}

/// Output of one command. The text form is rendered from the structured
/// value, so both carry the same numbers.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub body: Value,
}

impl Report {
    pub fn new(command: &str, status: Status, body: Value) -> Self {
        Report { command: command.into(), status, body }
    }

    pub fn json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), self.command.clone().into());
        m.insert("status".into(), format!("{:?}", self.status).to_lowercase().into());
        m.insert("report".into(), self.body.clone());
        Value::Object(m)
    }

    pub fn text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, format!("{:?}", self.status).to_lowercase());
        render(&self.body, 1, &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(if *b { "yes".into() } else { "no".into() }),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match x {
                    Value::Object(m) if m.values().all(|y| scalar(y).is_some()) => {
                        let parts: Vec<String> = m.iter().map(|(k, y)| format!("{k}: {}", scalar(y).unwrap())).collect();
                        out.push_str(&format!("{pad}- {}\n", parts.join(", ")));
                    }
                    _ => match scalar(x) {
                        Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}-\n"));
                            render(x, depth + 1, out);
                        }
                    },
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_lists_every_value() {
        let r = Report::new("hh", Status::Ok, json!({"dims": [{"deg": 0, "dim": 2}, {"deg": 1, "dim": 1}], "stable": true}));
        assert_eq!(r.text(), "hh: ok\n  dims:\n    - deg: 0, dim: 2\n    - deg: 1, dim: 1\n  stable: yes\n");
    }
}
