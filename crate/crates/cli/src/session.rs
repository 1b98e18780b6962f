//! REPL state: output format, depth and the colon commands.

use surreal_core::check_derivation_axioms;
use surreal_core::series::DEFAULT_DEPTH;

use crate::eval::{run, Format};

pub struct Session {
    pub format: Format,
    pub depth: usize,
}

/// What a line asks the REPL to do next.
#[derive(Debug, PartialEq, Eq)]
pub enum Reply {
    Output(String),
    Error(String),
    Silent,
    Quit,
}

impl Default for Session {
    fn default() -> Self {
        Session {
            format: Format::Nf,
            depth: DEFAULT_DEPTH,
        }
    }
}

const HELP: &str = "commands: :nf :sign :json :depth N :axioms [SEED [COUNT]] :quit";

impl Session {
    pub fn handle(&mut self, line: &str) -> Reply {
        let line = line.trim();
        if line.is_empty() {
            return Reply::Silent;
        }
        if let Some(cmd) = line.strip_prefix(':') {
            return self.command(cmd);
        }
        match run(line, self.format, self.depth) {
            Ok(s) => Reply::Output(s),
            Err(e) => Reply::Error(e.to_string()),
        }
    }

    fn command(&mut self, cmd: &str) -> Reply {
        let mut words = cmd.split_whitespace();
        let name = words.next().unwrap_or("");
        let args: Vec<&str> = words.collect();
        match (name, args.as_slice()) {
            ("nf", []) => self.format = Format::Nf,
            ("sign", []) => self.format = Format::Sign,
            ("json", []) => self.format = Format::Json,
            ("depth", []) => return Reply::Output(format!("depth {}", self.depth)),
            ("depth", [n]) => match n.parse::<usize>() {
                Ok(d) if d > 0 => self.depth = d,
                _ => return Reply::Error(format!("invalid depth '{n}'")),
            },
            ("axioms", rest) if rest.len() <= 2 => {
                let seed = rest.first().map_or(Ok(1), |s| s.parse::<u64>());
                let count = rest.get(1).map_or(Ok(100), |s| s.parse::<usize>());
                let (Ok(seed), Ok(count)) = (seed, count) else {
                    return Reply::Error("usage: :axioms [SEED [COUNT]]".to_string());
                };
                let report = check_derivation_axioms(seed, count, self.depth);
                return Reply::Output(report.to_text().trim_end().to_string());
            }
            ("quit" | "q", []) => return Reply::Quit,
            ("help", []) => return Reply::Output(HELP.to_string()),
            _ => return Reply::Error(format!("unknown command ':{cmd}'; {HELP}")),
        }
        Reply::Silent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commands_change_state() {
        let mut s = Session::default();
        assert_eq!(s.handle("1/2"), Reply::Output("1/2".to_string()));
        assert_eq!(s.handle(":sign"), Reply::Silent);
        assert_eq!(s.handle("1/2"), Reply::Output("+-".to_string()));
        assert_eq!(s.handle(":json"), Reply::Silent);
        assert_eq!(
            s.handle("1"),
            Reply::Output(r#"{"terms":[{"coef":"1/1","exp":{"terms":[],"truncated":false}}],"truncated":false}"#.to_string())
        );
        s.handle(":nf");
        s.handle(":depth 2");
        assert_eq!(s.depth, 2);
        assert_eq!(s.handle("1/(1-w^-1)"), Reply::Output("1 + w^-1 + ... (truncated at depth 2)".to_string()));
        assert!(matches!(s.handle(":depth x"), Reply::Error(_)));
        assert!(matches!(s.handle(":bogus"), Reply::Error(_)));
        assert!(matches!(s.handle("1/0"), Reply::Error(_)));
        assert_eq!(s.handle(":quit"), Reply::Quit);
    }

    #[test]
    fn axioms_command_reports_every_law() {
        let mut s = Session::default();
        let Reply::Output(text) = s.handle(":axioms 1 10") else { panic!() };
        assert_eq!(text.lines().count(), 6);
        assert!(text.lines().all(|l| l.contains("pass")), "{text}");
    }
}
