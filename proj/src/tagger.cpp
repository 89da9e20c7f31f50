// Copyright 2026 The Overlap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <string_view>
#include <unordered_set>

#include "overlap/text.hpp"

namespace overlap {

namespace {

using WordSet = std::unordered_set<std::string_view>;

const WordSet kDeterminers = {"the", "a", "an", "every", "each", "some", "any", "no",
                              "another", "either", "neither", "both", "all", "whose"};
const WordSet kPossessives = {"his", "her", "its", "their", "my", "our", "your"};
const WordSet kDemonstratives = {"this", "that", "these", "those"};
const WordSet kPronouns = {
    "i", "me", "you", "he", "him", "she", "it", "we", "us", "they", "them", "myself",
    "yourself", "himself", "herself", "itself", "ourselves", "themselves", "yourselves", "mine",
    "yours", "hers", "ours", "theirs", "someone", "somebody", "anyone", "anybody", "everyone",
    "everybody", "nobody", "nothing", "something", "anything", "everything", "who", "whom",
    "i'm", "i've", "i'd", "i'll", "you're", "you've", "you'd", "you'll", "he's", "he'd",
    "he'll", "she's", "she'd", "she'll", "it's", "it'd", "it'll", "we're", "we've", "we'd",
    "we'll", "they're", "they've", "they'd", "they'll"};
const WordSet kCopulas = {"be",   "am",     "is",     "are",     "was",     "were",  "been",
                          "being", "isn't", "aren't", "wasn't", "weren't", "seem", "seems",
                          "seemed", "become", "becomes", "became"};
const WordSet kModals = {"can",     "could",    "will",    "would",    "shall",    "should",
                         "may",     "might",    "must",    "do",       "does",     "did",
                         "can't",   "cannot",   "couldn't", "won't",   "wouldn't", "shouldn't",
                         "mustn't", "mightn't", "shan't",  "don't",    "doesn't",  "didn't"};
const WordSet kAuxiliaries = {"have", "has", "had", "having", "haven't", "hasn't", "hadn't",
                              "ain't", "ought"};
const WordSet kNegations = {"not", "never", "n't"};
const WordSet kIntensifiers = {"very", "too", "quite", "really", "extremely", "rather",
                               "more",  "most", "less", "so",     "pretty"};
const WordSet kOtherClosed = {
    "of", "in", "on", "at", "by", "for", "with", "about", "against", "between", "into",
    "through", "during", "to", "from", "up", "down", "out", "off", "over", "under", "again",
    "further", "then", "once", "here", "there", "when", "where", "why", "how", "very", "too",
    "also", "just", "only", "even", "still", "already", "always", "often", "sometimes", "soon",
    "now", "ago", "really", "quite", "rather", "almost", "ever", "yet", "more", "most", "less",
    "least", "as", "than", "like", "well", "or", "nor", "whether", "which", "what", "not",
    "never", "n't", "yes", "oh", "nope", "yeah", "ok", "okay", "hey", "hi", "please", "away",
    "back", "around", "across", "along", "behind", "beyond", "toward", "towards", "upon",
    "within", "without", "onto", "among", "via", "per", "instead", "anyway", "maybe",
    "perhaps", "however", "therefore", "thus", "that's", "there's", "here's", "enough",
    "certainly", "together", "apart", "else"};
const WordSet kPrepositions = {"of",     "in",    "on",     "at",   "by",      "for",
                               "with",   "about", "against", "between", "into", "through",
                               "during", "from",  "over",   "under", "upon",   "within",
                               "without", "onto", "among",  "across", "behind", "toward",
                               "towards", "like"};
const WordSet kAdjectives = {
    "good", "bad", "big", "small", "large", "little", "old", "young", "new", "heavy", "light",
    "long", "short", "tall", "high", "low", "strong", "weak", "late", "early", "hard", "easy",
    "happy", "sad", "angry", "afraid", "busy", "rich", "poor", "sick", "ill", "hungry", "full",
    "empty", "hot", "cold", "warm", "cool", "smart", "stupid", "clever", "kind", "nice",
    "mean", "fast", "slow", "right", "wrong", "true", "false", "ready", "able", "unable",
    "sure", "better", "best", "worse", "worst", "bigger", "smaller", "older", "younger",
    "larger", "stronger", "weaker", "taller", "shorter", "faster", "slower", "harder",
    "easier", "richer", "poorer", "heavier", "lighter", "great", "important", "different",
    "same", "other", "own", "whole", "free", "dark", "bright", "clean", "dirty", "quiet",
    "loud", "safe", "lazy", "honest", "popular", "available", "intelligent", "excellent",
    "beautiful", "ugly", "pretty", "wise", "crazy", "real", "certain", "clear", "simple",
    "difficult", "possible", "impossible", "huge", "tiny", "deep", "wide", "narrow", "thin",
    "thick", "fat", "sorry", "glad", "proud", "upset", "jealous", "careful", "polite", "rude",
    "fair", "unfair", "guilty", "innocent", "responsible", "wet", "dry", "soft", "many", "few",
    "several", "first", "last", "next", "best", "main", "public", "private", "entire",
    "steel", "sweet", "fresh", "brave", "calm", "ill", "serious"};
const WordSet kVerbBase = {
    "lift", "paint", "call", "help", "ask", "play", "pull", "push", "kill", "love", "hate",
    "need", "want", "tell", "say", "go", "come", "get", "give", "take", "make", "see", "know",
    "think", "find", "leave", "put", "keep", "let", "begin", "run", "bring", "buy", "build",
    "catch", "teach", "feel", "fight", "hold", "hear", "lose", "meet", "pay", "read", "send",
    "sit", "sell", "speak", "spend", "stand", "win", "write", "eat", "drink", "drive", "fly",
    "forget", "forgive", "hit", "hurt", "beat", "bite", "break", "choose", "fall", "grow",
    "hide", "ring", "shoot", "shut", "sing", "sleep", "steal", "swim", "throw", "understand",
    "wear", "wake", "lend", "lead", "try", "stop", "thank", "trust", "owe", "beg", "pass",
    "answer", "visit", "hug", "kiss", "marry", "invite", "warn", "blame", "punish", "admire",
    "envy", "ignore", "hire", "join", "follow", "miss", "carry", "move", "open", "close",
    "look", "watch", "wait", "work", "live", "die", "tried", "tries", "says", "goes", "comes",
    "gets", "gives", "takes", "makes", "sees", "knows", "thinks", "wants", "needs", "tells",
    "calls", "helps", "likes", "loves", "hates", "manipulates", "beats", "lifts", "gets",
    "give", "lied", "cry", "cries", "agree", "refuse", "convince", "persuade", "bully",
    "annoy", "scold", "praise", "defeat", "chase", "respect", "fear", "avoid", "hug"};
const WordSet kVerbPast = {
    "told", "said", "went", "gone", "came", "got", "gave", "given", "took", "taken", "made",
    "saw", "seen", "knew", "known", "thought", "found", "left", "kept", "began", "ran",
    "brought", "bought", "built", "caught", "taught", "felt", "fought", "held", "heard", "lost",
    "met", "paid", "sent", "sat", "sold", "spoke", "spent", "stood", "won", "wrote", "ate",
    "drank", "drove", "flew", "forgot", "forgave", "beat", "bit", "broke", "chose", "fell",
    "grew", "hid", "rang", "rose", "shot", "sang", "sank", "slept", "stole", "struck", "swam",
    "threw", "understood", "wore", "woke", "lent", "led", "bent", "dug", "fed", "shook",
    "became", "done", "gotten", "written", "eaten", "driven", "forgotten", "broken", "chosen",
    "stolen", "thrown", "worn"};
// -ed / -ing words that are nouns or adjectives rather than verb forms.
const WordSet kNotVerbish = {
    "bed", "red", "need", "seed", "speed", "feed", "shed", "thing", "king", "ring", "wing",
    "sing", "bring", "string", "spring", "morning", "evening", "nothing", "something",
    "anything", "everything", "building", "wedding", "ceiling", "feeling", "meeting",
    "during", "hundred", "sled", "wicked", "naked", "sacred", "kindred", "ping", "ding",
    "swing", "sting", "bling", "ceiling", "pudding", "clothing", "painting", "sibling",
    "darling", "shilling"};

enum class Lex : uint8_t {
  kDet,
  kPossessive,
  kDemonstrative,
  kPron,
  kConn,
  kCopula,
  kModal,
  kAux,
  kNegation,
  kOther,
  kNumber,
  kVerbBase,
  kVerbPast,
  kAdj,
  kAdverbLy,
  kVerbish,
  kProper,
  kUnknown,
};

bool has_suffix(std::string_view w, std::string_view suffix) {
  return w.size() > suffix.size() + 1 && w.substr(w.size() - suffix.size()) == suffix;
}

bool capitalized(const Token& t) {
  return !t.surface.empty() && std::isupper(static_cast<unsigned char>(t.surface[0]));
}

Lex classify(const Token& t, size_t index, const Lexicon& lexicon) {
  std::string_view w = t.norm;
  if (kDeterminers.count(w)) return Lex::kDet;
  if (kPossessives.count(w)) return Lex::kPossessive;
  if (kDemonstratives.count(w)) return Lex::kDemonstrative;
  if (kPronouns.count(w)) return Lex::kPron;
  if (lexicon.connectives.contains(w)) return Lex::kConn;
  if (kCopulas.count(w)) return Lex::kCopula;
  if (kModals.count(w)) return Lex::kModal;
  if (kAuxiliaries.count(w)) return Lex::kAux;
  if (kNegations.count(w)) return Lex::kNegation;
  if (kOtherClosed.count(w)) return Lex::kOther;
  if (std::isdigit(static_cast<unsigned char>(w[0]))) return Lex::kNumber;
  if (capitalized(t) && (index > 0 || lexicon.is_name(w))) return Lex::kProper;
  if (kVerbPast.count(w)) return Lex::kVerbPast;
  if (kVerbBase.count(w)) return Lex::kVerbBase;
  if (kAdjectives.count(w)) return Lex::kAdj;
  if (kNotVerbish.count(w)) return Lex::kUnknown;
  if (has_suffix(w, "ly") && w != "family" && w != "reply" && w != "supply") return Lex::kAdverbLy;
  if (has_suffix(w, "ous") || has_suffix(w, "ful") || has_suffix(w, "less") ||
      has_suffix(w, "ive") || has_suffix(w, "able") || has_suffix(w, "ible") ||
      has_suffix(w, "ish")) {
    return Lex::kAdj;
  }
  if (has_suffix(w, "ed") || has_suffix(w, "ing")) return Lex::kVerbish;
  return Lex::kUnknown;
}

// Tokens that can head or modify a noun phrase after a determiner.
bool nominal(Lex lex) {
  return lex == Lex::kUnknown || lex == Lex::kAdj || lex == Lex::kVerbish ||
         lex == Lex::kVerbBase || lex == Lex::kProper || lex == Lex::kNumber;
}

}  // namespace

std::vector<Tag> HeuristicTagger::tag(std::span<const Token> tokens) const {
  const size_t n = tokens.size();
  std::vector<Lex> lex(n);
  for (size_t i = 0; i < n; ++i) lex[i] = classify(tokens[i], i, *lexicon_);

  std::vector<Tag> out(n, Tag::kNoun);
  for (size_t i = 0; i < n; ++i) {
    const std::string_view w = tokens[i].norm;
    const Tag prev = i > 0 ? out[i - 1] : Tag::kNone;
    const Lex prev_lex = i > 0 ? lex[i - 1] : Lex::kOther;
    const bool has_next = i + 1 < n;
    const Lex next_lex = has_next ? lex[i + 1] : Lex::kOther;
    const std::string_view prev_word = i > 0 ? std::string_view(tokens[i - 1].norm) : "";

    switch (lex[i]) {
      case Lex::kDet:
        out[i] = Tag::kDet;
        break;
      case Lex::kPossessive:
        out[i] = has_next && nominal(next_lex) ? Tag::kDet : Tag::kPron;
        break;
      case Lex::kDemonstrative:
        if (has_next && nominal(next_lex) && next_lex != Lex::kVerbish &&
            next_lex != Lex::kVerbBase) {
          out[i] = Tag::kDet;
        } else if (w == "that" && has_next) {
          out[i] = Tag::kOther;
        } else {
          out[i] = Tag::kPron;
        }
        break;
      case Lex::kPron:
        out[i] = Tag::kPron;
        break;
      case Lex::kConn:
        // "so" after a verb and before a modifier is an intensifier.
        if (w == "so" && prev == Tag::kVerb && has_next &&
            (next_lex == Lex::kAdj || next_lex == Lex::kUnknown || next_lex == Lex::kAdverbLy ||
             next_lex == Lex::kVerbish || kIntensifiers.count(tokens[i + 1].norm))) {
          out[i] = Tag::kOther;
        } else {
          out[i] = Tag::kConn;
        }
        break;
      case Lex::kCopula:
      case Lex::kModal:
      case Lex::kAux:
      case Lex::kVerbPast:
        out[i] = Tag::kVerb;
        break;
      case Lex::kNegation:
      case Lex::kOther:
      case Lex::kNumber:
      case Lex::kAdverbLy:
        out[i] = Tag::kOther;
        break;
      case Lex::kProper:
        out[i] = Tag::kPropn;
        break;
      case Lex::kAdj:
        out[i] = Tag::kAdj;
        break;
      case Lex::kVerbBase:
        if (prev == Tag::kDet || prev == Tag::kAdj ||
            (prev == Tag::kOther && kPrepositions.count(prev_word))) {
          out[i] = Tag::kNoun;
        } else {
          out[i] = Tag::kVerb;
        }
        break;
      case Lex::kVerbish:
        // Participles are adjectival after a determiner or adjective, and
        // after a copula plus degree word ("was so tired").
        if (prev == Tag::kDet || prev == Tag::kAdj ||
            (prev == Tag::kOther && kIntensifiers.count(prev_word) && i > 1 && lex[i - 2] == Lex::kCopula)) {
          out[i] = Tag::kAdj;
        } else {
          out[i] = Tag::kVerb;
        }
        break;
      case Lex::kUnknown:
        if (prev_lex == Lex::kModal || (prev_lex == Lex::kNegation && i > 1 &&
                                        (lex[i - 2] == Lex::kModal || lex[i - 2] == Lex::kAux))) {
          out[i] = Tag::kVerb;
        } else if (prev_word == "to" && has_next &&
                   (next_lex == Lex::kDet || next_lex == Lex::kPron ||
                    next_lex == Lex::kPossessive || next_lex == Lex::kProper)) {
          out[i] = Tag::kVerb;
        } else if (prev_lex == Lex::kCopula || (prev == Tag::kOther && kIntensifiers.count(prev_word))) {
          out[i] = Tag::kAdj;
        } else {
          out[i] = Tag::kNoun;
        }
        break;
    }
  }
  return out;
}

}  // namespace overlap
