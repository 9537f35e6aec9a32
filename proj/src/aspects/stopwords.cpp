// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/aspects.hpp"

namespace xabsa::aspects {

const std::set<std::string, std::less<>>& stopwords() {
  static const std::set<std::string, std::less<>> words = {
      "a", "about", "above", "across", "after", "again", "against", "all",
      "almost", "along", "already", "also", "although", "always", "am",
      "among", "an", "and", "another", "any", "are", "around", "as", "at",
      "be", "became", "because", "become", "been", "before", "being", "below",
      "between", "both", "but", "by", "can", "cannot", "could", "did", "do",
      "does", "doing", "done", "down", "due", "during", "each", "either",
      "else", "enough", "etc", "even", "ever", "every", "few", "first", "for",
      "from", "further", "furthermore", "had", "has", "have", "having", "he",
      "hence", "her", "here", "hers", "herself", "him", "himself", "his",
      "how", "however", "i", "if", "in", "into", "is", "it", "its", "itself",
      "just", "last", "least", "less", "like", "made", "make", "many", "may",
      "me", "might", "more", "moreover", "most", "much", "must", "my",
      "myself", "neither", "no", "nor", "not", "now", "of", "off", "often",
      "on", "once", "one", "only", "onto", "or", "other", "others", "otherwise",
      "our", "ours", "ourselves", "out", "over", "own", "per", "perhaps",
      "rather", "same", "several", "shall", "she", "should", "since", "so",
      "some", "such", "than", "that", "the", "their", "theirs", "them",
      "themselves", "then", "there", "thereby", "therefore", "these", "they",
      "this", "those", "though", "three", "through", "thus", "to", "together",
      "too", "toward", "towards", "two", "under", "until", "up", "upon", "us",
      "use", "used", "using", "very", "via", "was", "we", "well", "were",
      "what", "whatever", "when", "where", "whereas", "whether", "which",
      "while", "who", "whom", "whose", "why", "will", "with", "within",
      "without", "would", "yet", "you", "your", "yours", "yourself",
      "yourselves", "paper", "study", "e", "g", "ie", "eg", "s",
  };
  return words;
}

}  // namespace xabsa::aspects
