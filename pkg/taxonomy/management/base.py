"""
Base command cho các management command của project WSD

Shared flags, configuration and lazily loaded artifacts (taxonomy, IC table)
for build_ic, sim, disambig, annotate and eval. Domain errors leave with exit
status 2, usage errors with exit status 1.
"""

import logging
import os
import sys
from typing import Iterable, List, Literal, Optional

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from corpus.services.infocontent import ICTable, read_ic
from disambiguation.services.disambig import DisambiguationOptions
from taxonomy.exceptions import UnknownSynset, WsdError
from taxonomy.graph import Taxonomy
from taxonomy.loaders import load_taxonomy

logger = logging.getLogger(__name__)

USAGE_ERROR = 1
DATA_ERROR = 2


class Config(BaseModel):
    """Effective configuration: settings defaults overridden by command flags"""

    model_config = ConfigDict(frozen=True)

    taxonomy_source: str
    ic_path: Optional[str] = None
    log_base: Literal["e", "2"] = "e"
    credit_ties: bool = False
    extend_ancestors: bool = False
    seed: int = Field(default=0, ge=0)

    @field_validator("taxonomy_source")
    @classmethod
    def _check_taxonomy_source(cls, value: str) -> str:
        if not value:
            raise ValueError("no taxonomy given (use --taxonomy or WSD_TAXONOMY)")
        if not os.path.exists(value):
            raise ValueError(f"taxonomy path {value!r} does not exist")
        return value

    @property
    def is_wordnet(self) -> bool:
        return os.path.isdir(self.taxonomy_source)

    @property
    def disambiguation_options(self) -> DisambiguationOptions:
        return DisambiguationOptions(
            credit_ties=self.credit_ties, extend_ancestors=self.extend_ancestors
        )


def parse_group(value: str) -> List[str]:
    """Split a comma-separated noun group, dropping empty items"""
    return [word.strip() for word in value.split(",") if word.strip()]


class BaseWsdCommand(BaseCommand):
    """Base class for all WSD commands"""

    requires_system_checks = []

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._config = None
        self._taxonomy = None
        self._ic = None

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)

        def usage_error(message):
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(USAGE_ERROR, f"{parser.prog}: error: {message}\n")
            raise CommandError(f"Error: {message}", returncode=USAGE_ERROR)

        parser.error = usage_error
        return parser

    def add_arguments(self, parser):
        parser.add_argument("--taxonomy", help="WordNet dict directory or synthetic taxonomy file")
        parser.add_argument("--ic", dest="ic_path", help="IC table path")
        parser.add_argument("--log-base", choices=["e", "2"], help="logarithm base for IC")
        parser.add_argument("--credit-ties", action="store_true", default=None)
        parser.add_argument("--extend-ancestors", action="store_true", default=None)
        parser.add_argument("--seed", type=int)

    def handle(self, *args, **options):
        try:
            self._config = self.build_config(options)
        except ValidationError as e:
            messages = "; ".join(error["msg"] for error in e.errors())
            raise CommandError(messages, returncode=USAGE_ERROR) from None

        try:
            output = self.run(self._config, *args, **options)
        except WsdError as e:
            raise CommandError(str(e), returncode=DATA_ERROR) from e
        except OSError as e:
            raise CommandError(f"{e.filename}: {e.strerror}", returncode=DATA_ERROR) from e
        return output

    def run(self, config: Config, *args, **options) -> Optional[str]:
        raise NotImplementedError("subclasses of BaseWsdCommand must provide a run() method")

    def build_config(self, options) -> Config:
        def pick(name, default):
            value = options.get(name)
            return default if value is None else value

        return Config(
            taxonomy_source=pick("taxonomy", settings.WSD_TAXONOMY),
            ic_path=pick("ic_path", settings.WSD_IC_PATH) or None,
            log_base=pick("log_base", settings.WSD_LOG_BASE),
            credit_ties=pick("credit_ties", settings.WSD_CREDIT_TIES),
            extend_ancestors=pick("extend_ancestors", settings.WSD_EXTEND_ANCESTORS),
            seed=pick("seed", settings.WSD_SEED),
        )

    def _get_taxonomy(self) -> Taxonomy:
        """Get taxonomy instance"""
        if self._taxonomy is None:
            self._taxonomy = load_taxonomy(self._config.taxonomy_source)
        return self._taxonomy

    def _get_ic(self) -> ICTable:
        """Load the IC table and check it belongs to the taxonomy"""
        if self._ic is None:
            if not self._config.ic_path:
                raise CommandError(
                    "no IC table given (use --ic or WSD_IC_PATH)", returncode=USAGE_ERROR
                )
            with open(self._config.ic_path, encoding="utf-8") as handle:
                table = read_ic(handle, self._config.log_base)
            taxonomy = self._get_taxonomy()
            for synset_id in table.frequencies.freq:
                if synset_id not in taxonomy.synsets:
                    raise UnknownSynset(synset_id)
            self._ic = table
        return self._ic

    def write_lines(self, lines: Iterable[str]) -> None:
        for line in lines:
            self.stdout.write(line)
