// All strings are invented for testing and do not come from real payments.
#include "txguard/synth/generator.hpp"

namespace txguard::synth {

const CohortDocumentation& describe_cohorts() {
  static const CohortDocumentation doc = [] {
    CohortDocumentation d;
    d.abusive_families = {
        {"degrading_comments",
         "repetitive, abusive, degrading or hateful comments about a person",
         {"you are worthless", "nobody will ever love you pathetic loser", "you stupid useless idiot",
          "ugly loser everyone laughs at you", "you disgusting liar", "such a pathetic idiot", "you are trash"}},
        {"violence_threats",
         "threats of physical or sexual violence to a person",
         {"i will hurt you when i find you", "watch your back", "you will regret this i will destroy you",
          "i know where you live you will suffer", "you are dead when i see you", "i will kill you"}},
        {"self_harm_threats",
         "threats of self-harm",
         {"if you leave i will kill myself", "i will die tonight because of you", "answer or i hurt myself",
          "you will be sorry when i am dead", "no point living without you i will end it"}},
        {"minor_endangerment",
         "endangering or causing distress to a minor",
         {"you will never see our son again", "the kids will pay for what you did",
          "i will take the children and disappear", "tell our daughter her mum is a liar and trash",
          "the kids will suffer because of you"}},
        {"sexual_requests",
         "repeated or unwanted sexual requests to a person",
         {"send me nudes now", "send naked pics or else", "come to my bed tonight", "i want your body send pics",
          "sexy pics now or i tell everyone"}},
        {"filter_evasion",
         "repetitive, abusive, degrading or hateful comments about a person",
         {"u.n.b.l.o.c.k me", "un-block me now", "UNBLOCK ME", "unblockme", "i d i o t", "w.o.r.t.h.l.e.s.s",
          "u n b l o c k"}},
        {"persistent_contact",
         "repetitive, abusive, degrading or hateful comments about a person",
         {"answer your phone", "why are you ignoring me", "pick up now", "call me back right now",
          "i am not going away", "you cannot hide from me", "reply to me", "answer me"}},
    };
    d.conversational_phrases = {
        "hey just wanted to say thanks for dinner last night it was really lovely to catch up",
        "happy birthday mate hope you have a great day and a few cold ones",
        "la la the river runs slow and the summer sun is gold la la",
        "did you see the game last night that last minute goal was unbelievable",
        "running late again sorry will make it up to you with coffee tomorrow",
        "miss you heaps cannot wait for the holidays xoxo",
        "i hate mondays so much this week is going to be long haha",
        "the stars are out tonight and the city hums along oh oh",
        "how is the new job going are they treating you well",
        "thanks for looking after the dog she loved the beach walk",
        "lol that meme you sent me was too good i cried laughing",
        "good luck with the exam tomorrow you will smash it",
        "are we still on for the market saturday morning",
        "remember that camping trip when the tent blew away omg",
        "mum says hi and wants to know if you are coming for lunch sunday",
        "so tired after that shift but the team was great",
        "wow that holiday photo is amazing where was that",
        "sorry i missed your call was stuck in a meeting all afternoon",
    };
    d.banter_phrases = {
        "shut up idiot haha", "you stupid legend", "loser owes me a beer", "damn you crushed it",
        "ugly mug see you friday", "you are dead meat at footy lol", "answer your phone mate",
        "why are you ignoring my texts lol", "call me back", "pick up now lazy", "you absolute moron lol",
        "crap pizza but cheers", "i will destroy you at pool", "you will regret that bet haha", "reply to me",
        "beers", "ha", "oi", "lol", "debt paid loser",
    };
    d.normal_references = {"rent",        "Rent",          "dinner",       "groceries", "electricity bill",
                           "thanks for lunch", "footy tickets", "uber split",   "",          "gift",
                           "petrol",      "phone bill",    "BOARD",        "share of bills", "concert tix",
                           "Loan repay",  "CAR REGO",      "gym",          "Internet",  "school fees"};
    return d;
  }();
  return doc;
}

}  // namespace txguard::synth
