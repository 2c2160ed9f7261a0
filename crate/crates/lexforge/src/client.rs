//! HTTP client for a remote mask-fill service.
//!
//! `POST {base}/v1/mask-fill` with `{"tokens", "mask_index", "top_k"}`;
//! the answer is `{"candidates": [{"word", "score"}]}`. 503 and transport
//! failures are retried with exponential backoff, 400 is not.

use std::thread;
use std::time::Duration;

use lexforge_core::oracle::ScoredWord;
use lexforge_core::{CandidateSet, MaskFiller, MaskQuery, OracleError};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde::{Deserialize, Serialize};

pub const MASK_FILL_PATH: &str = "/v1/mask-fill";

#[derive(Serialize)]
struct Request<'a> {
    tokens: &'a [String],
    mask_index: usize,
    top_k: usize,
}

#[derive(Deserialize)]
struct Response {
    candidates: Vec<WireCandidate>,
}

#[derive(Deserialize)]
struct WireCandidate {
    word: String,
    score: f64,
}

#[derive(Debug, Clone)]
pub struct RetryPolicy {
    /// Retries after the first attempt.
    pub max_retries: u32,
    pub base_delay: Duration,
    pub max_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 3,
            base_delay: Duration::from_millis(250),
            max_delay: Duration::from_secs(8),
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `attempt` (0-based): doubling, capped, with
    /// up to 25% jitter.
    fn delay(&self, attempt: u32, rng: &mut StdRng) -> Duration {
        let exp = self.base_delay.saturating_mul(1u32 << attempt.min(16));
        let capped = exp.min(self.max_delay);
        capped.mul_f64(1.0 + rng.gen_range(0.0..0.25))
    }
}

pub struct HttpOracle {
    client: Client,
    endpoint: String,
    retry: RetryPolicy,
    rng: StdRng,
}

impl HttpOracle {
    /// `base` may be the server root or the full mask-fill endpoint.
    pub fn new(base: &str, retry: RetryPolicy, seed: u64) -> Result<Self, OracleError> {
        let trimmed = base.trim_end_matches('/');
        let endpoint = if trimmed.ends_with(MASK_FILL_PATH) {
            trimmed.to_string()
        } else {
            format!("{trimmed}{MASK_FILL_PATH}")
        };
        let client = Client::builder()
            .timeout(Duration::from_secs(60))
            .build()
            .map_err(|e| OracleError::Unavailable(e.to_string()))?;
        Ok(HttpOracle {
            client,
            endpoint,
            retry,
            rng: StdRng::seed_from_u64(seed),
        })
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    fn attempt(&self, query: &MaskQuery) -> Result<CandidateSet, OracleError> {
        let body = Request {
            tokens: &query.tokens,
            mask_index: query.mask_index,
            top_k: query.top_k,
        };
        let resp = self
            .client
            .post(&self.endpoint)
            .json(&body)
            .send()
            .map_err(|e| OracleError::Unavailable(e.to_string()))?;
        let status = resp.status();
        match status {
            StatusCode::OK => {}
            StatusCode::BAD_REQUEST => {
                let text = resp.text().unwrap_or_default();
                return Err(OracleError::Protocol(format!("server rejected query: {text}")));
            }
            s if s == StatusCode::SERVICE_UNAVAILABLE || s.is_server_error() => {
                return Err(OracleError::Unavailable(format!("server answered {s}")));
            }
            s => return Err(OracleError::Protocol(format!("unexpected status {s}"))),
        }
        let parsed: Response = resp
            .json()
            .map_err(|e| OracleError::Protocol(format!("malformed response: {e}")))?;
        let scored = parsed
            .candidates
            .into_iter()
            .map(|c| ScoredWord {
                word: c.word,
                score: c.score,
            })
            .collect();
        CandidateSet::from_scored(scored, query.top_k)
    }
}

impl MaskFiller for HttpOracle {
    fn mask_fill(&mut self, query: &MaskQuery) -> Result<CandidateSet, OracleError> {
        let mut attempt = 0;
        loop {
            match self.attempt(query) {
                Err(e) if e.is_retryable() && attempt < self.retry.max_retries => {
                    let wait = self.retry.delay(attempt, &mut self.rng);
                    attempt += 1;
                    thread::sleep(wait);
                }
                other => return other,
            }
        }
    }
}
