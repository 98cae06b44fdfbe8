import json
import os
from pathlib import Path
from typing import Any

ENV_STAGE = "STAGE"
ENV_REGION = "REGION"
ENV_SEED = "DIVIDEKIT_SEED"

STAGE = os.getenv(ENV_STAGE, "local")
REGION = os.getenv(ENV_REGION, "us-east-1")

ROOT_DIR = str(Path(__file__).parent.parent.resolve())
INPUT_FILEPATH = f"{ROOT_DIR}/env.json"


class Config:
    def __init__(self):
        self._config = self.load_env()
        # the test harness pins sampling through the environment
        seed = os.getenv(ENV_SEED)
        if seed is not None:
            self._config["SEED"] = int(seed)

    def get(self, var_name: str) -> Any:
        try:
            val = self._config[var_name]
        except KeyError:
            raise TypeError(f"Variable {var_name} not found in config")

        return val

    def load_env(self):
        """
        Loads the following parameters from "env.json":
        * `LOG_LEVEL` (str): log level above which logs will be displayed (_e.g. "INFO"_)
        * `SERVICE` (str): name of the service ("dividekit")
        * `METRICS_NAMESPACE` (str): CloudWatch namespace for command timings outside the local stage
        * `SEED` (int): seed for randomized sampling, override with environment variable DIVIDEKIT_SEED
        * `DISPLAY_PROGRESS` (boolean): whether or not to show a progress bar during corpus audits
        * `LEGALITY_SAMPLES` (int): random (colored set, vertex) pairs per divide in the legality audit
        * `ATTACH_SAMPLES` (int): random colored states per divide in the attaching audit
        * `WINDING_SAMPLES` (int): random curves per divide in the reference-field audit
        * `CORE_SEARCH_DEPTH` (int): longest toggle script tried when no tripod core exists
        * `CORE_SEARCH_SUBSETS` (int): cap on connected ten-vertex subsets examined by that search
        """
        with open(INPUT_FILEPATH) as json_file:
            env_vars = json.load(json_file)

        stage_env = env_vars.get("default", {})
        stage_env.update(env_vars.get(STAGE, {}))

        return dict(stage_env)


config = Config()
