"""
Disambiguate noun groups and print per-sense phi listings.

Each group is printed word by word, senses ranked by phi:

    Word 'doctor'  (2 alternatives)
      1.0000  doctor_s1  doctor, physician: a licensed medical practitioner
      0.3579  doctor_s2  doctor: a person who holds a doctorate
"""

from typing import List

from django.core.management.base import CommandError

from disambiguation.services.disambig import WordGroup, disambiguate, top_senses
from taxonomy.management.base import USAGE_ERROR, BaseWsdCommand, parse_group


class Command(BaseWsdCommand):
    help = "Assign phi to every sense of every noun in a group"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--group", action="append", default=[], help="comma-separated nouns (repeatable)"
        )
        parser.add_argument("--group-file", help="one group, one noun per line")
        parser.add_argument("--top", type=int, help="print only the k best senses per word")

    def groups(self, options) -> List[List[str]]:
        groups = [parse_group(value) for value in options.get("group") or []]
        if options.get("group_file"):
            words = []
            with open(options["group_file"], encoding="utf-8") as handle:
                for line in handle:
                    if not line.startswith("#"):
                        words.extend(parse_group(line))
            groups.append(words)
        if not groups:
            raise CommandError("no group given (use --group or --group-file)", returncode=USAGE_ERROR)
        return groups

    def run(self, config, *args, **options):
        top = options.get("top")
        if top is not None and top < 1:
            raise CommandError("--top must be at least 1", returncode=USAGE_ERROR)
        taxonomy = self._get_taxonomy()
        ic = self._get_ic()

        for index, tokens in enumerate(self.groups(options)):
            if index:
                self.stdout.write("")
            group = WordGroup.from_tokens(taxonomy, tokens)
            self.stdout.write(f"Group: {', '.join(tokens)}")
            for token in group.skipped:
                self.stdout.write(f"'{token}': Not in WordNet")
            assignment = disambiguate(taxonomy, ic, group, config.disambiguation_options)
            for entry in assignment.words:
                self.stdout.write(f"Word '{entry.lemma}'  ({entry.num_senses} alternatives)")
                ranked = top_senses(assignment, entry.lemma, top or entry.num_senses)
                for sense, phi in ranked:
                    self.stdout.write(f"  {phi:.4f}  {sense}  {taxonomy.describe(sense)}")
