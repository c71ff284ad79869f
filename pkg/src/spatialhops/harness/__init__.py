from .clients import ChatRequest, LiveClient, MockOracleClient, MockUniformClient, ReplayClient, make_client
from .prompts import MODES, MissingAsset, PromptSpec, build_prompt
from .runner import RunConfig, run_eval, run_llm_asp
from .scoring import GUESS_RATE, OTHER, EvalRecord, ScoreTable, extract_answer
