from disambiguation.services.disambig import (
    DisambiguationOptions,
    WordGroup,
    annotate,
    disambiguate,
)
from taxonomy.management.base import BaseWsdCommand, parse_group


class Command(BaseWsdCommand):
    help = "Annotate each noun of a group with its highest well-supported concept"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--group", required=True, help="comma-separated nouns")

    def run(self, config, *args, **options):
        taxonomy = self._get_taxonomy()
        ic = self._get_ic()
        tokens = parse_group(options["group"])
        group = WordGroup.from_tokens(taxonomy, tokens)
        for token in group.skipped:
            self.stdout.write(f"'{token}': Not in WordNet")

        # Annotation is defined over the ancestor-extended sense lists
        extended = DisambiguationOptions(credit_ties=config.credit_ties, extend_ancestors=True)
        assignment = disambiguate(taxonomy, ic, group, extended)
        annotations = annotate(taxonomy, assignment)
        for lemma in group.words:
            sense = annotations[lemma]
            self.stdout.write(
                f"{lemma}  {assignment.phi(lemma, sense):.4f}  {sense}  {taxonomy.describe(sense)}"
            )
