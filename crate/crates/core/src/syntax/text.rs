//! Line-based frame and sequent files. `#` starts a comment.
//!
//! ```text
//! # frame
//! world alpha
//! world beta
//! edge alpha beta
//!
//! # sequent
//! hyp dia q @ alpha
//! goal bot @ alpha
//! ```

use thiserror::Error;

use super::context::{Context, Judgment};
use super::frame::{Frame, FrameError, World};
use super::prop::{parse_prop, ParseError, Prop};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn column_of(line: &str, word: &str) -> usize {
    let base = line.as_ptr() as usize;
    word.as_ptr() as usize - base + 1
}

pub fn parse_frame(src: &str) -> Result<Frame, TextError> {
    let mut worlds: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = strip_comment(raw);
        let words: Vec<&str> = line.split_whitespace().collect();
        let lineno = ln + 1;
        match words.as_slice() {
            [] => {}
            ["world", name] => {
                check_name(raw, name, lineno)?;
                worlds.push(name.to_string());
            }
            ["edge", a, b] => edges.push((a.to_string(), b.to_string())),
            [kw, ..] if *kw == "world" || *kw == "edge" => {
                return Err(ParseError::new(
                    lineno,
                    column_of(raw, kw),
                    format!("wrong number of arguments to `{kw}`"),
                )
                .into())
            }
            [kw, ..] => {
                return Err(ParseError::new(
                    lineno,
                    column_of(raw, kw),
                    format!("expected `world` or `edge`, found `{kw}`"),
                )
                .into())
            }
        }
    }
    Ok(Frame::new(&worlds, &edges)?)
}

fn check_name(line: &str, name: &str, lineno: usize) -> Result<(), ParseError> {
    let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(ParseError::new(lineno, column_of(line, name), format!("invalid world name `{name}`")))
    }
}

/// `Γ ⇒ C[w]` as read from a sequent file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub ctx: Context,
    pub goal: Prop,
    pub world: World,
}

impl Sequent {
    pub fn to_text(&self, frame: &Frame) -> String {
        let mut out = String::new();
        for j in &self.ctx {
            out.push_str(&format!("hyp {}\n", j.display(frame)));
        }
        out.push_str(&format!("goal {} @ {}\n", self.goal, frame.name(self.world)));
        out
    }
}

/// Parses `<prop> @ <world>`; `offset` is the column where `body` starts.
fn parse_located(
    body: &str,
    frame: &Frame,
    lineno: usize,
    offset: usize,
) -> Result<Judgment, ParseError> {
    let at = body
        .rfind('@')
        .ok_or_else(|| ParseError::new(lineno, offset + body.len(), "expected `@ <world>`"))?;
    let prop = parse_prop(&body[..at]).map_err(|e| e.at_line(lineno, offset - 1))?;
    let wname = body[at + 1..].trim();
    let wcol = offset + at + 1 + (body[at + 1..].len() - body[at + 1..].trim_start().len());
    let world = frame
        .world(wname)
        .ok_or_else(|| ParseError::new(lineno, wcol, format!("unknown world `{wname}`")))?;
    Ok(Judgment::new(prop, world))
}

pub fn parse_sequent(src: &str, frame: &Frame) -> Result<Sequent, ParseError> {
    let mut ctx = Context::new();
    let mut goal: Option<Judgment> = None;
    for (ln, raw) in src.lines().enumerate() {
        let lineno = ln + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let kw_col = line.len() - trimmed.len() + 1;
        let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let body_col = kw_col + kw.len() + 1;
        match kw {
            "hyp" => {
                ctx.insert(parse_located(rest, frame, lineno, body_col)?);
            }
            "goal" => {
                if goal.is_some() {
                    return Err(ParseError::new(lineno, kw_col, "more than one `goal` line"));
                }
                goal = Some(parse_located(rest, frame, lineno, body_col)?);
            }
            other => {
                return Err(ParseError::new(
                    lineno,
                    kw_col,
                    format!("expected `hyp` or `goal`, found `{other}`"),
                ))
            }
        }
    }
    let goal = goal.ok_or_else(|| ParseError::new(src.lines().count().max(1), 1, "missing `goal` line"))?;
    Ok(Sequent { ctx, goal: goal.prop, world: goal.world })
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: &str = "# running example\nworld alpha\nworld beta\nworld gamma\n\
                           edge alpha beta\nedge alpha gamma\nedge beta gamma\n";

    #[test]
    fn frame_round_trip() {
        let f = parse_frame(RUNNING).unwrap();
        assert_eq!(f, super::super::frame::running_frame());
        assert_eq!(parse_frame(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn frame_errors() {
        assert!(matches!(
            parse_frame("world a\nworld b\nedge a b\nedge b a\n"),
            Err(TextError::Frame(FrameError::Cyclic(_)))
        ));
        let e = parse_frame("world a\n  wrld b\n").unwrap_err();
        assert_eq!(e, TextError::Parse(ParseError::new(2, 3, "expected `world` or `edge`, found `wrld`")));
    }

    #[test]
    fn sequent_parses() {
        let f = parse_frame(RUNNING).unwrap();
        let s = parse_sequent("hyp dia q @ alpha\ngoal bot @ alpha # the example\n", &f).unwrap();
        assert_eq!(s.ctx.len(), 1);
        assert_eq!(s.goal, Prop::Bot);
        assert_eq!(parse_sequent(&s.to_text(&f), &f).unwrap(), s);
    }

    #[test]
    fn sequent_errors_are_positioned() {
        let f = parse_frame(RUNNING).unwrap();
        let e = parse_sequent("goal q @ delta\n", &f).unwrap_err();
        assert_eq!((e.line, e.col), (1, 10));
        let e = parse_sequent("hyp q @ alpha\n", &f).unwrap_err();
        assert!(e.msg.contains("missing"));
        let e = parse_sequent("goal q\n", &f).unwrap_err();
        assert!(e.msg.contains("@"));
        let e = parse_sequent("hyp\ngoal (q @ alpha\n", &f).unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_sequent("goal (q @ alpha\n", &f).unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.msg.contains("`)`"));
        let e = parse_sequent("goal q @ alpha\ngoal q @ beta\n", &f).unwrap_err();
        assert_eq!(e.line, 2);
    }
}
