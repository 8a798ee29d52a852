from disambiguation.services.similarity import similarity
from taxonomy.lemmas import normalize
from taxonomy.management.base import BaseWsdCommand


class Command(BaseWsdCommand):
    help = "Similarity of two nouns and their most informative subsumer"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("word1")
        parser.add_argument("word2")

    def run(self, config, *args, **options):
        taxonomy = self._get_taxonomy()
        ic = self._get_ic()
        words = [options["word1"], options["word2"]]

        missing = [w for w in words if not taxonomy.senses(normalize(w, taxonomy))]
        if missing:
            # Từ không có trong WordNet: báo rồi bỏ qua
            self.write_lines(f"'{w}': Not in WordNet" for w in missing)
            return

        result = similarity(taxonomy, ic, *words)
        self.write_lines(
            [
                f"sim({words[0]}, {words[1]}) = {result.value:.4f}",
                f"mis: {result.mis}  {taxonomy.describe(result.mis)}",
                f"tied={len(result.tied_mis)}",
            ]
        )
