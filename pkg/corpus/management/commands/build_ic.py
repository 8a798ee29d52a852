"""
Build an information content table from one or more corpus files.

Usage:
    python manage.py build_ic corpus.txt --taxonomy five_nouns.syn --out ic.tsv
"""

from django.core.management.base import CommandError

from corpus.services.counting import MODES, RAW_TEXT, count_stream, merge_counts, write_counts
from corpus.services.infocontent import ICTable, write_ic
from taxonomy.exceptions import EmptyCorpus
from taxonomy.management.base import USAGE_ERROR, BaseWsdCommand


class Command(BaseWsdCommand):
    help = "Count nouns in a corpus, propagate frequencies and write the IC table"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("corpus", nargs="+", help="corpus file(s)")
        parser.add_argument("--mode", choices=MODES, default=RAW_TEXT)
        parser.add_argument("--out", help="IC table to write (defaults to --ic)")
        parser.add_argument("--counts-out", help="also write the lemma counts here")

    def run(self, config, *args, **options):
        out_path = options.get("out") or config.ic_path
        if not out_path:
            raise CommandError("no output path (use --out or --ic)", returncode=USAGE_ERROR)

        taxonomy = self._get_taxonomy()
        shards = []
        for path in options["corpus"]:
            with open(path, encoding="utf-8") as stream:
                shards.append(count_stream(taxonomy, stream, options["mode"]))
        counts = merge_counts(shards)
        if counts.total_N == 0:
            raise EmptyCorpus()

        table = ICTable.from_counts(taxonomy, counts, config.log_base)
        with open(out_path, "w", encoding="utf-8") as handle:
            write_ic(table, handle)
        if options.get("counts_out"):
            with open(options["counts_out"], "w", encoding="utf-8") as handle:
                write_counts(counts, handle)

        self.write_lines(
            [
                f"N={counts.total_N}",
                f"vocabulary={len(counts)}",
                f"skipped={counts.skipped_total}",
            ]
        )
