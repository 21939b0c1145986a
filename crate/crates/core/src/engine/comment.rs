use rand::Rng;

use super::{EngineError, SimulationParams};
use crate::gateway::prompts::{self, profile_slots, COMMENT_REPROMPT, CRITIC_SENTENCE};
use crate::gateway::{ChatTurn, Gateway, GatewayError};
use crate::model::{CommentNode, Profile};

const MARKER: &str = "My comment:";

/// A generated reply before it is placed in the tree.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedComment {
    pub text: String,
    pub reasoning_trace: String,
    pub critical: bool,
    /// Word bounds the comment was asked to respect, if any.
    pub length_bounds: Option<(usize, usize)>,
}

impl GeneratedComment {
    /// Whether the comment ignored its requested length.
    pub fn out_of_bounds(&self) -> bool {
        self.length_bounds.is_some_and(|(lo, hi)| {
            let n = self.text.split_whitespace().count();
            n < lo || n > hi
        })
    }
}

/// Split a response into (reasoning preamble, comment) at the last marker.
pub fn extract_comment(response: &str) -> Option<(String, String)> {
    let at = response.rfind(MARKER)?;
    let comment = response[at + MARKER.len()..]
        .trim()
        .trim_matches(|c: char| c == '"' || c == '[' || c == ']')
        .trim()
        .to_string();
    if comment.is_empty() {
        return None;
    }
    Some((response[..at].trim().to_string(), comment))
}

/// Thread context shown to the agent: the topic, then one line per comment
/// along the path.
pub fn render_context(path: &[&CommentNode]) -> String {
    path.iter()
        .map(|n| if n.is_system() { n.text.clone() } else { format!("{}: {}", n.author, n.text) })
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// Write `agent`'s reply to the last node of `context`.
pub async fn generate_comment<R: Rng + ?Sized>(
    agent: &Profile,
    context: &[&CommentNode],
    params: &SimulationParams,
    rng: &mut R,
    gateway: &Gateway,
    seed: u64,
) -> Result<GeneratedComment, EngineError> {
    if context.first().is_none_or(|n| !n.is_root()) {
        return Err(EngineError::InvalidInput("comment context must start at the root"));
    }
    let critical = rng.random_bool(params.p_critic);
    let length_bounds = rng
        .random_bool(params.p_short)
        .then_some((params.min_comment_len, params.max_comment_len));
    let mut s = profile_slots(agent);
    s.insert("critic_type", if critical { CRITIC_SENTENCE.to_string() } else { String::new() });
    s.insert(
        "length_rule",
        length_bounds
            .map(|(lo, hi)| format!("Your comment should contain between {lo} and {hi} words.\n"))
            .unwrap_or_default(),
    );
    let system = prompts::template("comment_system").render(&s)?;
    s.insert("context", render_context(context));
    let user = prompts::template(prompts::COMMENT_GENERATION).render(&s)?;

    let mut request = gateway.request(prompts::COMMENT_GENERATION, system, user, seed);
    let skipped = |reason: String| EngineError::TurnSkipped {
        username: agent.username.clone(),
        reason,
    };
    let mut reprompted = false;
    loop {
        let response = match gateway.complete(&request).await {
            Ok(r) => r,
            Err(GatewayError::Refusal { raw }) => return Err(skipped(format!("refused: {raw}"))),
            Err(e) => return Err(e.into()),
        };
        if let Some((reasoning_trace, text)) = extract_comment(&response) {
            let out = GeneratedComment { text, reasoning_trace, critical, length_bounds };
            if out.out_of_bounds() {
                tracing::warn!(username = %agent.username, "comment outside requested length {length_bounds:?}");
            }
            return Ok(out);
        }
        if reprompted {
            return Err(EngineError::CommentParse { raw: response });
        }
        reprompted = true;
        request.turns.push(ChatTurn::assistant(response));
        request.turns.push(ChatTurn::user(COMMENT_REPROMPT));
    }
}
