from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional


class Command(Enum):
    STATS = "stats"
    GENERATE = "generate"
    FIT = "fit"
    COMPARE = "compare"
    TAILFIT = "tailfit"
    UPSCALE = "upscale"
    BENCH = "bench"


@dataclass
class RunConfig:
    command: Command
    inputs: List[str] = field(default_factory=list)
    output_dir: str = "./hyperlap-output"
    seed: int = 0
    threads: int = 1
    input_format: str = "edgelist"
    dedupe: bool = True
    drop_singletons: bool = True
    params: Dict[str, Any] = field(default_factory=dict)
    app_config: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['command'] = self.command.value
        return data
