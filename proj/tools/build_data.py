#!/usr/bin/env python3
"""Regenerates the bundled data files under data/.

Word lists come from lemminflect (inflections) and wordfreq (frequency
ranking).  Error-pattern inventories are written verbatim.  A MANIFEST with
FNV-1a 64 checksums is written last; the C++ loader refuses files whose
checksum does not match.

    pip install lemminflect wordfreq
    python3 tools/build_data.py data/
"""

import os
import sys

import lemminflect
import wordfreq

PREPOSITIONS = ['', 'of', 'with', 'at', 'from', 'into', 'during', 'including', 'until', 'against',
                'among', 'throughout', 'despite', 'towards', 'upon', 'concerning', 'to', 'in', 'for',
                'on', 'by', 'about', 'like', 'through', 'over', 'before', 'between', 'after', 'since',
                'without', 'under', 'within', 'along', 'following', 'across', 'behind', 'beyond',
                'plus', 'except', 'but', 'up', 'out', 'around', 'down', 'off', 'above', 'near']
DETERMINERS = ['the', 'a', 'an', 'that', 'this', '']
LETTER_PATTERNS = [('mb', 'm'), ('bt', 't'), ('tch', 'ch'), ('tm', 'm'), ('stle', 'sle'), ('wh', 'w'),
                   ('hono', 'ono'), ('hou', 'ou'), ('hones', 'ones'), ('rh', 'r'), ('kn', 'n'),
                   ('sw', 's'), ('wr', 'r'), ('who', 'ho'), ('gn', 'n'), ('gu', 'g'), ('ui', 'i'),
                   ('sc', 's'), ('al', 'a'), ('pn', 'n'), ('ps', 's'), ('pb', 'b'), ('dg', 'g'),
                   ('dn', 'n'), ('mn', 'm'), ('isl', 'il'), ('ough', 'uf'), ('through', 'thro'),
                   ('though', 'tho'), ('ea', 'ae'), ('ei', 'ie'), ('au', 'ua'), ('exh', 'ex'),
                   ('tion', 'sion'), ('sion', 'tion'), ('sure', 'shure'), ('cture', 'cshre'),
                   ('ere', 'ear'), ('ear', 'ere')]
VOWEL_COMBINATIONS = ['ea', 'ou', 'ei', 'ie', 'ai', 'uo', 'io', 'oi', 'au', 'ua', 'ow', 'wo']
SIMILAR_SOUNDS = [('a', ['u']), ('b', ['p']), ('p', ['b']), ('e', ['i', 'a']), ('o', ['u', 'w']),
                  ('f', ['v']), ('w', ['o', 'u']), ('u', ['a', 'o', 'w']), ('i', ['e', 'a', 'y']),
                  ('v', ['f']), ('y', ['i'])]
VERB_TYPES = ['inf', '1sg', '2sg', '3sg', 'pl', 'part', 'p', '1sgp', '2sgp', '3sgp', 'ppl', 'ppart']
POS_TYPES = ['NN', 'NNS', 'VB', 'JJ', 'JJR', 'JJS', 'RB']

PUNCTUATION = [',', '.', '!', '?', ';', ':', "'", '"', '-', '(', ')', "'s", "n't", "'re", "'ve",
               "'ll", "'m", "'d", '...']

N_APPEND = 1193
N_REPLACE = 3725


def pluralize(word):
    if word.endswith(('s', 'x', 'z', 'ch', 'sh')):
        return word + 'es'
    if len(word) > 1 and word.endswith('y') and word[-2] not in 'aeiou':
        return word[:-1] + 'ies'
    return word + 's'


def singularize(word):
    if len(word) > 3 and word.endswith('ies'):
        return word[:-3] + 'y'
    if word.endswith(('sses', 'shes', 'ches', 'xes', 'zes')):
        return word[:-2]
    if len(word) > 1 and word.endswith('s') and not word.endswith('ss'):
        return word[:-1]
    return word


def fnv1a64(data):
    h = 0xcbf29ce484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001b3) & 0xFFFFFFFFFFFFFFFF
    return h


def first(infl, tag):
    forms = infl.get(tag)
    return forms[0] if forms else None


def main(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    ranked = [w for w in wordfreq.top_n_list('en', 80000) if w.isascii() and w.isalpha() and w.islower()]
    function_words = set(PREPOSITIONS) | set(DETERMINERS)

    verbs, nouns, adjectives, plurals = [], [], [], []
    seen_plural = set()
    for w in ranked:
        lemmas = lemminflect.getAllLemmas(w)
        if len(verbs) < 5000 and w in lemmas.get('VERB', ()) and len(w) > 1:
            infl = lemminflect.getAllInflections(w, upos='VERB')
            vbd = first(infl, 'VBD')
            # regular verbs list no separate past participle
            forms = [vbd, first(infl, 'VBG'), first(infl, 'VBN') or vbd, first(infl, 'VBZ')]
            if all(f and f.isalpha() for f in forms):
                verbs.append([w] + forms)
        own = all(v == (w,) for v in lemmas.values())
        if (len(nouns) < 3000 and own and 'NOUN' in lemmas and set(lemmas) <= {'NOUN', 'VERB'}
                and w not in function_words and len(w) > 2):
            infl = lemminflect.getAllInflections(w, upos='NOUN')
            nns = first(infl, 'NNS')
            if nns and nns.isalpha() and nns != w:
                nouns.append(w)
                if (pluralize(w) != nns or singularize(nns) != w) and nns not in seen_plural:
                    plurals.append((w, nns))
                    seen_plural.add(nns)
        if (len(adjectives) < 1500 and own and set(lemmas) == {'ADJ'}
                and w not in function_words and len(w) > 2):
            infl = lemminflect.getAllInflections(w, upos='ADJ')
            jjr, jjs = first(infl, 'JJR'), first(infl, 'JJS')
            if jjr and jjs and jjr.endswith('er') and jjs.endswith('est') and jjr.isalpha():
                adjectives.append((w, jjr, jjs))

    def write(name, lines):
        with open(os.path.join(out_dir, name), 'w', encoding='utf-8', newline='\n') as f:
            for line in lines:
                f.write(line + '\n')

    write('verbs.tsv', ['\t'.join(v) for v in verbs])
    write('irregular_plurals.tsv', ['\t'.join(p) for p in plurals])
    write('nouns.txt', nouns)
    write('adjectives.tsv', ['\t'.join(a) for a in adjectives])
    write('prepositions.txt', PREPOSITIONS)
    write('determiners.txt', DETERMINERS)
    write('letter_patterns.tsv', [k + '\t' + v for k, v in LETTER_PATTERNS])
    write('vowel_combinations.txt', VOWEL_COMBINATIONS)
    write('similar_sounds.tsv', [k + '\t' + ','.join(v) for k, v in SIMILAR_SOUNDS])
    write('verb_types.txt', VERB_TYPES)
    write('pos_types.txt', POS_TYPES)

    # Append/replace inventories: most frequent tokens, with the noiser's
    # closed-class inventories always present so their swaps stay expressible.
    closed = [w for w in PREPOSITIONS + DETERMINERS if w]
    pool = list(dict.fromkeys(closed + PUNCTUATION + ranked))
    appends = pool[:N_APPEND]
    replaces = pool[:N_REPLACE]
    tags = ['$KEEP', '$DELETE']
    tags += ['$APPEND_' + t for t in appends]
    tags += ['$REPLACE_' + t for t in replaces]
    tags += ['$MERGE_HYPHEN', '$MERGE_SPACE']
    suffix_replace = ['AL_TO_E', 'ATION_TO_ING', 'CE_TO_T', 'D_TO_S', 'D_TO_T', 'ED_TO_ING', 'ED_TO_S',
                      'ER_TO_EST', 'EST_TO_ER', 'E_TO_AL', 'E_TO_ING', 'ICAL_TO_Y', 'IC_TO_Y',
                      'IES_TO_Y', 'ILY_TO_Y', 'ING_TO_ATION', 'ING_TO_E', 'ING_TO_ED', 'ING_TO_ION',
                      'ING_TO_S', 'ION_TO_ING', 'N_TO_ING', 'S_TO_D', 'S_TO_ED', 'S_TO_ING', 'S_TO_T',
                      'T_TO_CE', 'T_TO_D', 'T_TO_S', 'Y_TO_IC', 'Y_TO_ICAL', 'Y_TO_IED', 'Y_TO_IES',
                      'Y_TO_ILY']
    suffix_remove = ['able', 'age', 'al', 'ation', 'd', 'ed', 'er', 'es', 'est', 'ful', 'ing', 'ive',
                     'less', 'ly', 'n', 'ness', 'y']
    suffix_append = ['able', 'age', 'al', 'ation', 'd', 'ed', 'er', 'es', 'est', 'ful', 'ing', 'ist',
                     'ive', 'ly', 'n', 'ness', 'ship', 'wise', 'y']
    tags += ['$SUFFIXTRANSFORM_' + s for s in suffix_replace[:1]]
    tags += ['$SUFFIXTRANSFORM_APPEND_' + s for s in suffix_append]
    tags += ['$SUFFIXTRANSFORM_' + s for s in suffix_replace[1:22]]
    tags += ['$SUFFIXTRANSFORM_REMOVE_' + s for s in suffix_remove]
    tags += ['$SUFFIXTRANSFORM_' + s for s in suffix_replace[22:]]
    tags += ['$TRANSFORM_AGREEMENT_PLURAL', '$TRANSFORM_AGREEMENT_SINGULAR', '$TRANSFORM_CASE_CAPITAL',
             '$TRANSFORM_CASE_LOWER', '$TRANSFORM_CASE_UPPER', '$TRANSFORM_SPLIT_HYPHEN']
    forms = ['VBD', 'VBG', 'VBN', 'VBZ', 'VB']
    for a in forms:
        for b in ['VB', 'VBD', 'VBG', 'VBN', 'VBZ']:
            if a != b:
                tags.append('$TRANSFORM_VERB_%s_%s' % (a, b))
    tags.append('$UNKNOWN')
    write('default_tagset.txt', tags)

    files = ['verbs.tsv', 'irregular_plurals.tsv', 'nouns.txt', 'adjectives.tsv', 'prepositions.txt',
             'determiners.txt', 'letter_patterns.tsv', 'vowel_combinations.txt', 'similar_sounds.tsv',
             'verb_types.txt', 'pos_types.txt', 'default_tagset.txt']
    manifest = []
    for name in files:
        with open(os.path.join(out_dir, name), 'rb') as f:
            manifest.append('%016x  %s' % (fnv1a64(f.read()), name))
    write('MANIFEST', manifest)
    print('verbs=%d nouns=%d adjectives=%d irregular_plurals=%d tags=%d'
          % (len(verbs), len(nouns), len(adjectives), len(plurals), len(tags)))


if __name__ == '__main__':
    main(sys.argv[1] if len(sys.argv) > 1 else 'data')
