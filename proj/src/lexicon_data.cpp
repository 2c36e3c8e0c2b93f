// Built-in sentiment lexicon, negators, intensifiers, and stopword list.
//
// The lexicon is a small hand-curated table of clearly sentiment-bearing
// words.  It deliberately excludes demographic and occupational vocabulary
// (words like "married", "veteran", or "moderate" that appear as neutral
// categorical values in persona tables), so a persona built purely from
// categorical values scores near (0, 0) and any positive drift measured on
// narrative personas comes from genuinely affective language.

#include "persim/sentiment.hpp"

#include <sstream>

namespace persim {

namespace {

const char *const kLexiconCsv = R"lex(
# token,polarity,subjectivity
love,0.85,0.80
loves,0.85,0.80
loved,0.80,0.75
loving,0.80,0.80
adore,0.90,0.85
adores,0.90,0.85
cherish,0.85,0.80
cherishes,0.85,0.80
cherished,0.80,0.75
treasure,0.75,0.70
treasured,0.75,0.70
beloved,0.80,0.75
dear,0.60,0.65
fond,0.60,0.70
fondness,0.60,0.70
proud,0.75,0.80
pride,0.70,0.75
prides,0.70,0.75
happy,0.80,0.85
happiness,0.80,0.85
happily,0.75,0.80
joy,0.85,0.80
joyful,0.85,0.85
joyous,0.85,0.85
delight,0.80,0.80
delighted,0.80,0.80
delightful,0.80,0.85
glad,0.65,0.75
gladly,0.60,0.70
cheerful,0.75,0.80
cheer,0.65,0.70
merry,0.70,0.75
jolly,0.70,0.75
blissful,0.85,0.85
bliss,0.85,0.80
elated,0.85,0.85
ecstatic,0.90,0.90
thrilled,0.85,0.85
thrilling,0.75,0.80
excited,0.70,0.80
exciting,0.70,0.80
excitement,0.70,0.80
eager,0.55,0.70
eagerly,0.55,0.70
enthusiastic,0.70,0.80
enthusiasm,0.70,0.75
passionate,0.70,0.80
passionately,0.70,0.80
passion,0.65,0.75
devoted,0.70,0.70
devotion,0.70,0.70
dedicated,0.60,0.60
dedication,0.60,0.60
committed,0.50,0.55
loyal,0.65,0.65
loyalty,0.65,0.65
faithful,0.65,0.65
warm,0.60,0.65
warmth,0.65,0.65
warmly,0.60,0.65
kind,0.70,0.70
kindness,0.70,0.70
kindly,0.60,0.65
gentle,0.60,0.65
tender,0.60,0.70
caring,0.70,0.70
compassionate,0.75,0.75
compassion,0.75,0.70
generous,0.70,0.70
generosity,0.70,0.70
gracious,0.70,0.75
friendly,0.65,0.70
welcoming,0.65,0.70
hospitable,0.65,0.70
supportive,0.60,0.65
nurturing,0.65,0.70
thoughtful,0.65,0.70
considerate,0.65,0.70
respectful,0.55,0.60
respected,0.60,0.60
esteemed,0.65,0.65
admired,0.70,0.70
admire,0.70,0.70
admires,0.70,0.70
admirable,0.70,0.75
inspiring,0.75,0.80
inspired,0.70,0.75
inspiration,0.70,0.75
uplifting,0.75,0.80
encouraging,0.65,0.70
hopeful,0.65,0.75
hope,0.55,0.65
hopes,0.55,0.65
optimistic,0.70,0.80
optimism,0.70,0.75
confident,0.60,0.70
confidence,0.60,0.65
grateful,0.75,0.75
gratitude,0.75,0.75
thankful,0.75,0.75
blessed,0.75,0.75
fortunate,0.65,0.70
lucky,0.60,0.70
content,0.55,0.65
contented,0.60,0.70
satisfied,0.60,0.70
satisfying,0.60,0.70
satisfaction,0.60,0.65
fulfilled,0.70,0.75
fulfilling,0.70,0.75
rewarding,0.65,0.70
meaningful,0.55,0.65
pleased,0.60,0.70
pleasing,0.60,0.70
pleasure,0.65,0.70
pleasant,0.60,0.70
enjoy,0.65,0.70
enjoys,0.65,0.70
enjoyed,0.65,0.70
enjoyable,0.65,0.75
fun,0.65,0.75
funny,0.55,0.75
laugh,0.60,0.70
laughter,0.65,0.70
smile,0.60,0.65
smiles,0.60,0.65
smiling,0.60,0.65
beautiful,0.80,0.85
beautifully,0.75,0.80
beauty,0.70,0.75
lovely,0.75,0.80
gorgeous,0.85,0.90
stunning,0.85,0.90
radiant,0.80,0.85
vibrant,0.70,0.75
lively,0.60,0.70
charming,0.70,0.80
graceful,0.65,0.75
elegant,0.65,0.75
sweet,0.60,0.70
wonderful,0.85,0.90
wonderfully,0.80,0.85
marvelous,0.85,0.90
magnificent,0.85,0.90
splendid,0.80,0.85
superb,0.85,0.90
excellent,0.85,0.85
outstanding,0.85,0.85
exceptional,0.80,0.80
extraordinary,0.75,0.80
remarkable,0.70,0.75
impressive,0.70,0.75
amazing,0.85,0.90
fantastic,0.85,0.90
terrific,0.80,0.85
awesome,0.80,0.90
incredible,0.75,0.85
brilliant,0.80,0.85
great,0.70,0.75
good,0.55,0.60
nice,0.55,0.70
fine,0.40,0.55
better,0.45,0.55
best,0.75,0.70
perfect,0.85,0.85
ideal,0.70,0.75
favorite,0.65,0.75
positive,0.55,0.60
thriving,0.75,0.75
flourishing,0.75,0.75
prosperous,0.70,0.70
prosperity,0.65,0.65
successful,0.65,0.65
success,0.60,0.60
accomplished,0.65,0.65
accomplishment,0.65,0.65
achievement,0.60,0.60
talented,0.65,0.70
gifted,0.65,0.70
skillful,0.60,0.65
creative,0.55,0.65
imaginative,0.55,0.70
curious,0.45,0.65
wise,0.60,0.65
wisdom,0.60,0.60
clever,0.55,0.70
smart,0.55,0.65
intelligent,0.60,0.65
insightful,0.60,0.70
resilient,0.60,0.65
resilience,0.60,0.60
courageous,0.70,0.75
courage,0.65,0.70
brave,0.70,0.75
bold,0.50,0.65
determined,0.50,0.60
diligent,0.55,0.60
hardworking,0.55,0.60
honest,0.60,0.65
sincere,0.60,0.65
genuine,0.55,0.65
trustworthy,0.65,0.65
peaceful,0.65,0.70
serene,0.70,0.75
calm,0.55,0.60
tranquil,0.65,0.75
cozy,0.60,0.75
comfortable,0.55,0.65
comfort,0.50,0.60
safe,0.45,0.55
secure,0.45,0.55
fresh,0.45,0.60
clean,0.40,0.55
bright,0.55,0.65
sunny,0.55,0.65
playful,0.55,0.70
adventurous,0.55,0.70
energetic,0.55,0.65
spirited,0.55,0.70
magical,0.70,0.85
enchanting,0.75,0.85
captivating,0.70,0.80
fascinating,0.65,0.80
engaging,0.55,0.70
intriguing,0.50,0.75
memorable,0.55,0.70
heartwarming,0.80,0.85
heartfelt,0.70,0.80
hate,-0.85,0.85
hates,-0.85,0.85
hated,-0.80,0.80
hatred,-0.85,0.80
despise,-0.85,0.85
despises,-0.85,0.85
loathe,-0.85,0.85
detest,-0.85,0.85
dislike,-0.55,0.70
dislikes,-0.55,0.70
angry,-0.70,0.80
anger,-0.65,0.75
furious,-0.85,0.90
fury,-0.80,0.85
rage,-0.80,0.85
outraged,-0.80,0.85
irate,-0.80,0.85
resentful,-0.65,0.75
resentment,-0.65,0.70
bitter,-0.60,0.70
bitterness,-0.60,0.70
hostile,-0.70,0.75
hostility,-0.70,0.70
aggressive,-0.50,0.65
cruel,-0.80,0.80
cruelty,-0.80,0.75
brutal,-0.75,0.75
harsh,-0.55,0.65
vicious,-0.80,0.80
wicked,-0.70,0.80
evil,-0.85,0.80
vile,-0.85,0.85
nasty,-0.70,0.80
sad,-0.65,0.80
sadness,-0.65,0.75
sorrow,-0.70,0.75
sorrowful,-0.70,0.80
grief,-0.75,0.75
grieving,-0.75,0.80
mourning,-0.70,0.75
miserable,-0.80,0.85
misery,-0.75,0.80
unhappy,-0.70,0.80
depressed,-0.75,0.80
depressing,-0.70,0.80
gloomy,-0.60,0.75
bleak,-0.60,0.70
dreary,-0.55,0.70
dismal,-0.65,0.75
awful,-0.80,0.85
terrible,-0.80,0.85
horrible,-0.85,0.85
horrid,-0.85,0.85
dreadful,-0.80,0.85
atrocious,-0.85,0.90
abysmal,-0.85,0.90
bad,-0.55,0.60
worse,-0.60,0.65
worst,-0.80,0.75
lousy,-0.60,0.75
ugly,-0.65,0.80
disgusting,-0.80,0.85
disgust,-0.75,0.80
gross,-0.60,0.80
repulsive,-0.80,0.85
revolting,-0.80,0.85
offensive,-0.65,0.75
insulting,-0.65,0.75
rude,-0.60,0.75
fear,-0.55,0.65
fearful,-0.60,0.75
afraid,-0.60,0.75
scared,-0.60,0.75
terrified,-0.80,0.85
terrifying,-0.80,0.85
terror,-0.80,0.80
dread,-0.70,0.75
anxious,-0.55,0.75
anxiety,-0.55,0.70
worried,-0.50,0.70
worry,-0.50,0.65
worries,-0.50,0.65
nervous,-0.50,0.70
stressed,-0.55,0.70
stressful,-0.55,0.70
tense,-0.45,0.65
troubled,-0.55,0.70
distress,-0.65,0.70
distressed,-0.65,0.75
pain,-0.60,0.65
painful,-0.65,0.75
hurt,-0.60,0.70
hurtful,-0.65,0.75
suffering,-0.70,0.70
suffer,-0.65,0.65
suffers,-0.65,0.65
agony,-0.80,0.80
anguish,-0.80,0.80
despair,-0.80,0.80
hopeless,-0.75,0.80
helpless,-0.65,0.75
lonely,-0.60,0.75
loneliness,-0.60,0.70
isolated,-0.50,0.60
abandoned,-0.65,0.70
rejected,-0.60,0.70
rejection,-0.60,0.65
betrayed,-0.75,0.80
betrayal,-0.75,0.75
disappointed,-0.60,0.75
disappointing,-0.60,0.75
disappointment,-0.60,0.70
frustrated,-0.60,0.75
frustrating,-0.60,0.75
frustration,-0.60,0.70
annoyed,-0.50,0.70
annoying,-0.55,0.75
irritated,-0.55,0.70
irritating,-0.55,0.75
aggravating,-0.60,0.75
infuriating,-0.75,0.85
upset,-0.55,0.70
disturbed,-0.55,0.70
disturbing,-0.60,0.75
alarming,-0.60,0.70
shocking,-0.55,0.70
appalling,-0.75,0.85
dangerous,-0.55,0.60
danger,-0.50,0.55
threatening,-0.60,0.65
toxic,-0.70,0.70
harmful,-0.60,0.65
damaging,-0.55,0.60
destructive,-0.65,0.65
ruined,-0.65,0.70
ruin,-0.60,0.65
broken,-0.50,0.60
failed,-0.55,0.60
failure,-0.60,0.60
failing,-0.55,0.60
flawed,-0.45,0.60
defective,-0.55,0.65
inferior,-0.55,0.65
worthless,-0.75,0.80
useless,-0.65,0.75
pointless,-0.60,0.75
futile,-0.60,0.70
weak,-0.45,0.60
weary,-0.45,0.65
exhausted,-0.55,0.70
exhausting,-0.55,0.70
tired,-0.40,0.60
tiresome,-0.50,0.70
boring,-0.55,0.75
bored,-0.50,0.70
dull,-0.50,0.70
tedious,-0.55,0.70
monotonous,-0.50,0.70
bland,-0.45,0.70
mediocre,-0.45,0.70
grim,-0.60,0.70
tragic,-0.75,0.75
tragedy,-0.70,0.70
heartbreaking,-0.80,0.85
devastating,-0.80,0.80
devastated,-0.80,0.85
)lex";

const char *const kNegatorLines = R"neg(
not
no
never
neither
nor
cannot
can't
don't
doesn't
didn't
isn't
aren't
wasn't
weren't
won't
wouldn't
shouldn't
couldn't
hasn't
haven't
hadn't
hardly
scarcely
barely
without
lacking
)neg";

const char *const kIntensifierLines = R"intens(
# token,multiplier
very,1.30
really,1.30
extremely,1.50
incredibly,1.50
immensely,1.50
absolutely,1.50
utterly,1.50
totally,1.40
completely,1.40
deeply,1.40
highly,1.40
profoundly,1.50
remarkably,1.40
exceptionally,1.50
especially,1.25
particularly,1.25
truly,1.30
genuinely,1.25
so,1.20
quite,1.10
pretty,1.10
fairly,0.80
rather,0.90
somewhat,0.70
slightly,0.60
mildly,0.70
nearly,0.90
almost,0.90
)intens";

const char *const kStopwordLines = R"stop(
a
about
above
after
again
against
all
am
an
and
any
are
as
at
be
because
been
before
being
below
between
both
but
by
could
did
do
does
doing
down
during
each
few
for
from
further
had
has
have
having
he
her
here
hers
herself
him
himself
his
how
i
if
in
into
is
it
its
itself
just
me
more
most
my
myself
no
nor
not
now
of
off
on
once
only
or
other
our
ours
ourselves
out
over
own
same
she
should
so
some
such
than
that
the
their
theirs
them
themselves
then
there
these
they
this
those
through
to
too
under
until
up
was
we
were
what
when
where
which
while
who
whom
why
will
with
would
you
your
yours
yourself
yourselves
don't
isn't
aren't
wasn't
weren't
can't
won't
it's
he's
she's
that's
there's
they're
we're
you're
i'm
i've
we've
they've
i'd
he'd
she'd
we'd
they'd
i'll
he'll
she'll
we'll
they'll
doesn't
didn't
hasn't
haven't
hadn't
wouldn't
shouldn't
couldn't
let's
who's
what's
here's
where's
when's
why's
how's
)stop";

} // namespace

const SentimentLexicon &SentimentLexicon::builtin() {
    static const SentimentLexicon lexicon =
        from_csv_text(kLexiconCsv, kNegatorLines, kIntensifierLines);
    return lexicon;
}

const std::set<std::string> &builtin_stopwords() {
    static const std::set<std::string> stopwords = [] {
        std::set<std::string> words;
        std::string line;
        std::istringstream in(kStopwordLines);
        while (std::getline(in, line)) {
            if (!line.empty()) {
                words.insert(line);
            }
        }
        return words;
    }();
    return stopwords;
}

} // namespace persim
