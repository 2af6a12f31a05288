// Copyright 2026 The sampsel Authors.
// SPDX-License-Identifier: Apache-2.0

// Forty sentences with hand-written gold parses: twenty complete sentences
// and twenty fragments. Tags use "surface/POS/dep" triples.

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "sampsel/grammar.hpp"

namespace corpus {

struct GoldSentence {
  std::string text;
  std::string tagged;
  bool complete;
};

inline const std::vector<GoldSentence>& gold_sentences() {
  static const std::vector<GoldSentence> kSentences = {
      {"The cat runs.", "The/DT/det cat/NN/nsubj runs/VBZ/ROOT ././punct", true},
      {"She sold the house.", "She/PRP/nsubj sold/VBD/ROOT the/DT/det house/NN/dobj ././punct", true},
      {"There were delays.", "There/EX/expl were/VBD/ROOT delays/NNS/attr ././punct", true},
      {"The bridge was closed.", "The/DT/det bridge/NN/nsubjpass was/VBD/auxpass closed/VBN/ROOT ././punct", true},
      {"Officials will review the plan.", "Officials/NNS/nsubj will/MD/aux review/VB/ROOT the/DT/det plan/NN/dobj ././punct", true},
      {"We agree.", "We/PRP/nsubj agree/VBP/ROOT ././punct", true},
      {"The mayor has resigned.", "The/DT/det mayor/NN/nsubj has/VBZ/aux resigned/VBN/ROOT ././punct", true},
      {"It is raining.", "It/PRP/nsubj is/VBZ/aux raining/VBG/ROOT ././punct", true},
      {"Prices rose sharply.", "Prices/NNS/nsubj rose/VBD/ROOT sharply/RB/advmod ././punct", true},
      {"The team can win.", "The/DT/det team/NN/nsubj can/MD/aux win/VB/ROOT ././punct", true},
      {"He was arrested on Monday.", "He/PRP/nsubjpass was/VBD/auxpass arrested/VBN/ROOT on/IN/prep Monday/NNP/pobj ././punct", true},
      {"There is a problem.", "There/EX/expl is/VBZ/ROOT a/DT/det problem/NN/attr ././punct", true},
      {"Police say the suspect fled.", "Police/NNS/nsubj say/VBP/ROOT the/DT/det suspect/NN/nsubj fled/VBD/ccomp ././punct", true},
      {"They have left.", "They/PRP/nsubj have/VBP/aux left/VBN/ROOT ././punct", true},
      {"The report does not mention costs.", "The/DT/det report/NN/nsubj does/VBZ/aux not/RB/neg mention/VB/ROOT costs/NNS/dobj ././punct", true},
      {"Voters chose a new leader.", "Voters/NNS/nsubj chose/VBD/ROOT a/DT/det new/JJ/amod leader/NN/dobj ././punct", true},
      {"The museum opens tomorrow.", "The/DT/det museum/NN/nsubj opens/VBZ/ROOT tomorrow/NN/npadvmod ././punct", true},
      {"A fire broke out overnight.", "A/DT/det fire/NN/nsubj broke/VBD/ROOT out/RP/prt overnight/RB/advmod ././punct", true},
      {"The results were announced.", "The/DT/det results/NNS/nsubjpass were/VBD/auxpass announced/VBN/ROOT ././punct", true},
      {"I think so.", "I/PRP/nsubj think/VBP/ROOT so/RB/advmod ././punct", true},
      {"Running in the park.", "Running/VBG/ROOT in/IN/prep the/DT/det park/NN/pobj ././punct", false},
      {"In the park.", "In/IN/ROOT the/DT/det park/NN/pobj ././punct", false},
      {"The cat on the mat.", "The/DT/det cat/NN/ROOT on/IN/prep the/DT/det mat/NN/pobj ././punct", false},
      {"After the storm.", "After/IN/ROOT the/DT/det storm/NN/pobj ././punct", false},
      {"Very good news.", "Very/RB/advmod good/JJ/amod news/NN/ROOT ././punct", false},
      {"Sold to the highest bidder.", "Sold/VBN/ROOT to/IN/prep the/DT/det highest/JJS/amod bidder/NN/pobj ././punct", false},
      {"To be continued.", "To/TO/aux be/VB/auxpass continued/VBN/ROOT ././punct", false},
      {"Share this with Email.", "Share/VB/ROOT this/DT/dobj with/IN/prep Email/NNP/pobj ././punct", false},
      {"Breaking news.", "Breaking/VBG/amod news/NN/ROOT ././punct", false},
      {"The end.", "The/DT/det end/NN/ROOT ././punct", false},
      {"Sure!", "Sure/UH/ROOT !/./punct", false},
      {"Under the bridge near the river.", "Under/IN/ROOT the/DT/det bridge/NN/pobj near/IN/prep the/DT/det river/NN/pobj ././punct", false},
      {"Mostly sunny, with light winds.", "Mostly/RB/advmod sunny/JJ/ROOT ,/,/punct with/IN/prep light/JJ/amod winds/NNS/pobj ././punct", false},
      {"A man walking his dog.", "A/DT/det man/NN/ROOT walking/VBG/acl his/PRP$/poss dog/NN/dobj ././punct", false},
      {"Photo by Reuters.", "Photo/NN/ROOT by/IN/prep Reuters/NNP/pobj ././punct", false},
      {"Click here.", "Click/VB/ROOT here/RB/advmod ././punct", false},
      {"Two people injured.", "Two/CD/nummod people/NNS/ROOT injured/VBN/acl ././punct", false},
      {"According to officials.", "According/VBG/prep to/IN/prep officials/NNS/pobj ././punct", false},
      {"Without a doubt.", "Without/IN/ROOT a/DT/det doubt/NN/pobj ././punct", false},
      {"Read more.", "Read/VB/ROOT more/JJR/dobj ././punct", false},
  };
  return kSentences;
}

inline sampsel::grammar::Parse parse_tagged(const std::string& tagged) {
  sampsel::grammar::Parse parse;
  std::istringstream in(tagged);
  std::string triple;
  while (in >> triple) {
    // The surface may itself be "." so split from the right.
    const auto dep_at = triple.rfind('/');
    const auto pos_at = triple.rfind('/', dep_at - 1);
    parse.push_back({triple.substr(0, pos_at), triple.substr(pos_at + 1, dep_at - pos_at - 1),
                     triple.substr(dep_at + 1)});
  }
  return parse;
}

}  // namespace corpus
