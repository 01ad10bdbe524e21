from .filterexpr import FilterExpression, parse_filter
from .main import main
from .pipeline import PipelineSpec, split_steps

__all__ = ["FilterExpression", "PipelineSpec", "main", "parse_filter", "split_steps"]
