#include "plcomp/names.hpp"

#include <array>

namespace plcomp::names {

namespace {

using namespace std::string_view_literals;

constexpr std::array kPeople = {
    "Alice"sv,   "Bob"sv,     "Carol"sv,   "David"sv,   "Emma"sv,    "Frank"sv,   "Grace"sv,
    "Henry"sv,   "Irene"sv,   "Jack"sv,    "Karen"sv,   "Leo"sv,     "Mia"sv,     "Nathan"sv,
    "Olivia"sv,  "Paul"sv,    "Quinn"sv,   "Rachel"sv,  "Sam"sv,     "Tina"sv,    "Uma"sv,
    "Victor"sv,  "Wendy"sv,   "Xavier"sv,  "Yara"sv,    "Zach"sv,    "Aaron"sv,   "Bella"sv,
    "Caleb"sv,   "Diana"sv,   "Ethan"sv,   "Fiona"sv,   "George"sv,  "Hannah"sv,  "Ian"sv,
    "Julia"sv,   "Kevin"sv,   "Laura"sv,   "Martin"sv,  "Nora"sv,    "Oscar"sv,   "Peter"sv,
    "Rose"sv,    "Simon"sv,   "Tara"sv,    "Ursula"sv,  "Vincent"sv, "Walter"sv,  "Yvonne"sv,
    "Zoe"sv,     "Adam"sv,    "Brian"sv,   "Chloe"sv,   "Daniel"sv,  "Elena"sv,   "Felix"sv,
    "Gina"sv,    "Hugo"sv,    "Isabel"sv,  "James"sv,   "Kate"sv,    "Lucas"sv,   "Maria"sv,
    "Noah"sv,    "Owen"sv,    "Penny"sv,   "Ruby"sv,    "Steven"sv,  "Thomas"sv,  "Vera"sv,
    "William"sv, "Amy"sv,     "Ben"sv,     "Claire"sv,  "Derek"sv,   "Eva"sv,     "Gavin"sv,
    "Helen"sv,   "Ivan"sv,    "Jane"sv,    "Kyle"sv,    "Lily"sv,    "Mark"sv,    "Nina"sv,
    "Oliver"sv,  "Philip"sv,  "Robert"sv,  "Sarah"sv,   "Tom"sv,     "Victoria"sv, "Andrew"sv,
    "Beth"sv,    "Charles"sv, "Donna"sv,   "Edward"sv,  "Faith"sv,   "Gordon"sv,  "Holly"sv,
    "Isaac"sv,   "Joan"sv,    "Keith"sv,   "Linda"sv,   "Michael"sv, "Nancy"sv,   "Patrick"sv,
    "Rita"sv,    "Scott"sv,   "Teresa"sv,  "Wayne"sv,   "Alan"sv,    "Betty"sv,   "Colin"sv,
    "Dorothy"sv, "Eric"sv,    "Frances"sv, "Gary"sv,    "Heidi"sv,   "Jason"sv,   "Kelly"sv,
    "Larry"sv,   "Megan"sv,   "Neil"sv,    "Pamela"sv,  "Roger"sv,   "Susan"sv,   "Tony"sv,
    "Valerie"sv, "Arthur"sv,  "Bruce"sv,   "Cindy"sv,   "Dennis"sv,  "Ellen"sv,   "Fred"sv,
    "Gloria"sv,  "Harold"sv,  "Jerry"sv,   "Joyce"sv,   "Kenneth"sv, "Lisa"sv,    "Monica"sv,
    "Norman"sv,  "Phyllis"sv, "Ralph"sv,   "Sharon"sv,  "Terry"sv,   "Vivian"sv,  "Albert"sv,
    "Brenda"sv,  "Carl"sv,    "Denise"sv,  "Eugene"sv,  "Flora"sv,   "Glenn"sv,   "Hazel"sv,
    "Jeffrey"sv, "June"sv,    "Kurt"sv,    "Louise"sv,  "Marvin"sv,  "Naomi"sv,   "Randy"sv,
    "Sandra"sv,  "Troy"sv,    "Wanda"sv,   "Abigail"sv, "Bernard"sv, "Connie"sv,  "Douglas"sv,
    "Edith"sv,   "Floyd"sv,   "Gwen"sv,    "Howard"sv,  "Janet"sv,   "Kirk"sv,    "Leah"sv,
    "Milton"sv,  "Nelson"sv,  "Paula"sv,   "Russell"sv, "Sylvia"sv,  "Todd"sv,    "Wilma"sv,
    "Angela"sv,  "Barry"sv,   "Carmen"sv,  "Dale"sv,    "Esther"sv,  "Franklin"sv, "Greta"sv,
    "Herbert"sv, "Jill"sv,    "Karl"sv,    "Lorraine"sv, "Maurice"sv, "Nadia"sv,  "Perry"sv,
    "Regina"sv,  "Stanley"sv, "Thelma"sv,  "Vernon"sv,  "Agnes"sv,   "Bradley"sv, "Clara"sv,
    "Dean"sv,    "Elsie"sv,   "Fernando"sv, "Gilbert"sv, "Harriet"sv, "Jeremy"sv, "Kristen"sv,
    "Lloyd"sv,   "Mabel"sv,
};

constexpr std::array kRelations = {
    "teacher"sv,  "instructor"sv, "mentor"sv,   "boss"sv,     "friend"sv,   "neighbor"sv,
    "doctor"sv,   "coach"sv,      "advisor"sv,  "supervisor"sv, "partner"sv, "tutor"sv,
    "dentist"sv,  "lawyer"sv,     "landlord"sv, "roommate"sv, "colleague"sv, "guardian"sv,
    "sponsor"sv,  "manager"sv,    "trainer"sv,  "assistant"sv, "pharmacist"sv, "barber"sv,
};

constexpr std::array kItems = {
    "Eyelash Viper"sv,  "Minke Whale"sv,   "Pelican"sv,      "Forest Mammoth"sv, "Boomslang"sv,
    "Gull"sv,           "Boxfish"sv,       "Dyeing Dart Frog"sv, "Chinstrap Penguin"sv, "Red Fox"sv,
    "Snow Leopard"sv,   "Barn Owl"sv,      "Sea Otter"sv,    "Koala"sv,          "Gray Wolf"sv,
    "Bald Eagle"sv,     "Green Turtle"sv,  "Moose"sv,        "Flamingo"sv,       "Hedgehog"sv,
    "Meerkat"sv,        "Puffin"sv,        "Lynx"sv,         "Walrus"sv,         "Axolotl"sv,
    "Bison"sv,          "Cobra"sv,         "Dolphin"sv,      "Emu"sv,            "Gecko"sv,
    "Ibis"sv,           "Jaguar"sv,        "Kingfisher"sv,   "Lemur"sv,          "Manatee"sv,
    "Narwhal"sv,        "Ocelot"sv,        "Panda"sv,        "Quokka"sv,         "Raccoon"sv,
};

constexpr std::array kPlaces = {
    "Mare Serenitatis"sv, "Riverside Zoo"sv, "Pine Valley"sv, "Coral Bay"sv, "Maple Park"sv,
    "Stone Harbor"sv,     "Willow Creek"sv,  "Cedar Ridge"sv, "Sunset Reef"sv, "Amber Forest"sv,
};

}  // namespace

std::span<const std::string_view> people() { return kPeople; }
std::span<const std::string_view> relations() { return kRelations; }
std::span<const std::string_view> items() { return kItems; }
std::span<const std::string_view> places() { return kPlaces; }

}  // namespace plcomp::names
