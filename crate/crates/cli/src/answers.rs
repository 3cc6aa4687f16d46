//! One-line answer syntax for terminal elicitation.
//!
//! ```text
//! text         HotelMatch
//! list         hotel owners; travellers          (empty line: none)
//! features     search by place => difficulty to find hotels -; reviews => trust +
//! deepening    saturated | via fun at work + +
//! cross-links  none | company results +; <- developers satisfaction +
//! review       yes | no | add concept X; link A -> B +; remove X; unlink A -> B;
//!              rename X -> Y; deepen
//! ```
//!
//! `skip` leaves the current phase. A line starting with `{` is read as the
//! JSON form of an answer.

use hymap_core::elicitation::{
    Answer, AnswerShape, AspectLink, CrossLink, FeatureSpec, Phase, Prompt, ReviewCommand,
};
use hymap_core::{NodeKind, Sign};

pub fn help(prompt: &Prompt) -> &'static str {
    match prompt.phase {
        Phase::Naming => "a name",
        Phase::Customers | Phase::Aspects => "items separated by `;` (empty line for none)",
        Phase::Features => "`feature => aspect +, aspect -; feature ...`",
        Phase::Deepening => "`saturated` or `via <concept> [sign-in] <sign-out>`",
        Phase::CrossLinking => "`none` or `<concept> <sign>; <- <concept> <sign>`",
        Phase::Review => "`yes`, `no`, or commands: add/link/remove/unlink/rename/deepen separated by `;`",
        Phase::Done => "",
    }
}

fn split_items(line: &str) -> Vec<String> {
    line.split(';').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

/// Split a trailing sign token off `text`.
fn trailing_sign(text: &str) -> Option<(String, Sign)> {
    let text = text.trim();
    let (head, last) = text.rsplit_once(char::is_whitespace)?;
    let sign = last.parse().ok()?;
    Some((head.trim().to_string(), sign))
}

pub fn parse(prompt: &Prompt, line: &str) -> Result<Answer, String> {
    let line = line.trim();
    if line.starts_with('{') {
        return serde_json::from_str(line).map_err(|e| format!("JSON answer: {e}"));
    }
    if line.eq_ignore_ascii_case("skip") && prompt.phase != Phase::Naming {
        return Ok(Answer::Skip);
    }
    match (prompt.phase, prompt.shape) {
        (_, AnswerShape::Text) => {
            if line.is_empty() {
                Err("an answer is required".into())
            } else {
                Ok(Answer::Text { text: line.into() })
            }
        }
        (_, AnswerShape::TextList) => Ok(Answer::List {
            items: split_items(line),
        }),
        (Phase::Features, _) => features(line),
        (Phase::Deepening, _) => deepening(line),
        (Phase::CrossLinking, _) => cross_links(line),
        (Phase::Review, _) => review(line),
        (phase, _) => Err(format!("no answer expected in phase {phase}")),
    }
}

fn features(line: &str) -> Result<Answer, String> {
    let mut features = Vec::new();
    for item in split_items(line) {
        let (label, links) = match item.split_once("=>") {
            Some((l, rest)) => (l.trim(), rest),
            None => (item.as_str(), ""),
        };
        if label.is_empty() {
            return Err(format!("missing feature name in `{item}`"));
        }
        let mut parsed = Vec::new();
        for link in links.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (aspect, sign) =
                trailing_sign(link).ok_or_else(|| format!("`{link}` needs a sign (+, - or o) at the end"))?;
            parsed.push(AspectLink { aspect, sign });
        }
        features.push(FeatureSpec {
            label: label.to_string(),
            links: parsed,
        });
    }
    Ok(Answer::Features { features })
}

fn deepening(line: &str) -> Result<Answer, String> {
    let lower = line.to_ascii_lowercase();
    if matches!(lower.as_str(), "saturated" | "sat" | "yes" | "y") {
        return Ok(Answer::Saturated);
    }
    let rest = line
        .strip_prefix("via ")
        .ok_or("expected `saturated` or `via <concept> [sign-in] <sign-out>`")?;
    let (head, sign_out) = trailing_sign(rest).ok_or("the intermediate concept needs an outgoing sign")?;
    let (concept, sign_in) = match trailing_sign(&head) {
        Some((c, s)) => (c, Some(s)),
        None => (head, None),
    };
    if concept.is_empty() {
        return Err("missing concept name".into());
    }
    Ok(Answer::Intermediate {
        concept,
        sign_in,
        sign_out,
    })
}

fn cross_links(line: &str) -> Result<Answer, String> {
    if line.is_empty() || line.eq_ignore_ascii_case("none") || line.eq_ignore_ascii_case("no") {
        return Ok(Answer::CrossLinks { links: vec![] });
    }
    let mut links = Vec::new();
    for item in split_items(line) {
        let (reverse, body) = match item.strip_prefix("<-") {
            Some(b) => (true, b.trim()),
            None => (false, item.as_str()),
        };
        let (concept, sign) = trailing_sign(body).ok_or_else(|| format!("`{item}` needs a sign at the end"))?;
        links.push(CrossLink { concept, sign, reverse });
    }
    Ok(Answer::CrossLinks { links })
}

fn review(line: &str) -> Result<Answer, String> {
    match line.to_ascii_lowercase().as_str() {
        "yes" | "y" => return Ok(Answer::Confirm { coherent: true }),
        "no" | "n" => return Ok(Answer::Confirm { coherent: false }),
        _ => {}
    }
    let mut commands = Vec::new();
    for item in split_items(line) {
        let (verb, rest) = item.split_once(char::is_whitespace).unwrap_or((item.as_str(), ""));
        let rest = rest.trim();
        let arrow = || {
            rest.split_once("->")
                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                .ok_or_else(|| format!("`{item}` needs `A -> B`"))
        };
        let cmd = match verb.to_ascii_lowercase().as_str() {
            "add" => {
                let (kind, label) = rest.split_once(char::is_whitespace).ok_or("`add <kind> <label>`")?;
                let kind: NodeKind = kind.parse()?;
                ReviewCommand::AddNode {
                    kind,
                    label: label.trim().into(),
                }
            }
            "link" => {
                let (src, dst) = arrow()?;
                match trailing_sign(&dst) {
                    Some((dst, sign)) => ReviewCommand::AddEdge {
                        src,
                        dst,
                        sign: Some(sign),
                    },
                    None => ReviewCommand::AddEdge { src, dst, sign: None },
                }
            }
            "remove" => ReviewCommand::Remove { target: rest.into() },
            "unlink" => {
                let (src, dst) = arrow()?;
                ReviewCommand::RemoveEdge { src, dst }
            }
            "rename" => {
                let (target, label) = arrow()?;
                ReviewCommand::Substitute { target, label }
            }
            "deepen" => ReviewCommand::Deepen,
            other => return Err(format!("unknown review command `{other}`")),
        };
        commands.push(cmd);
    }
    if commands.is_empty() {
        return Err("expected `yes`, `no` or review commands".into());
    }
    Ok(Answer::Review { commands })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prompt(phase: Phase, shape: AnswerShape) -> Prompt {
        Prompt {
            id: "p1".into(),
            phase,
            question: "?".into(),
            shape,
            subjects: vec![],
        }
    }

    #[test]
    fn lists_and_skip() {
        let p = prompt(Phase::Customers, AnswerShape::TextList);
        assert_eq!(
            parse(&p, "patient; health professionals ;").unwrap(),
            Answer::List {
                items: vec!["patient".into(), "health professionals".into()]
            }
        );
        assert_eq!(parse(&p, "").unwrap(), Answer::List { items: vec![] });
        assert_eq!(parse(&p, "skip").unwrap(), Answer::Skip);
    }

    #[test]
    fn features_with_links() {
        let p = prompt(Phase::Features, AnswerShape::EdgeAnnotation);
        let a = parse(&p, "search by place => difficulty to find hotels -, price o; news feed").unwrap();
        let Answer::Features { features } = a else { panic!() };
        assert_eq!(features.len(), 2);
        assert_eq!(features[0].links[1].aspect, "price");
        assert_eq!(features[0].links[1].sign, Sign::Neutral);
        assert!(features[1].links.is_empty());
        assert!(parse(&p, "x => y").is_err());
    }

    #[test]
    fn deepening_forms() {
        let p = prompt(Phase::Deepening, AnswerShape::EdgeAnnotation);
        assert_eq!(parse(&p, "saturated").unwrap(), Answer::Saturated);
        assert_eq!(
            parse(&p, "via fun at work + -").unwrap(),
            Answer::Intermediate {
                concept: "fun at work".into(),
                sign_in: Some(Sign::Positive),
                sign_out: Sign::Negative
            }
        );
        assert_eq!(
            parse(&p, "via fun +").unwrap(),
            Answer::Intermediate {
                concept: "fun".into(),
                sign_in: None,
                sign_out: Sign::Positive
            }
        );
        assert!(parse(&p, "maybe").is_err());
    }

    #[test]
    fn review_commands() {
        let p = prompt(Phase::Review, AnswerShape::YesNo);
        assert_eq!(parse(&p, "yes").unwrap(), Answer::Confirm { coherent: true });
        let a = parse(&p, "add concept company results; link a b -> company results +; rename x -> y; deepen").unwrap();
        let Answer::Review { commands } = a else { panic!() };
        assert_eq!(commands.len(), 4);
        assert_eq!(
            commands[1],
            ReviewCommand::AddEdge {
                src: "a b".into(),
                dst: "company results".into(),
                sign: Some(Sign::Positive)
            }
        );
    }

    #[test]
    fn json_escape_hatch() {
        let p = prompt(Phase::Deepening, AnswerShape::EdgeAnnotation);
        assert_eq!(parse(&p, r#"{"type":"saturated"}"#).unwrap(), Answer::Saturated);
    }
}
