#pragma once

// Hand-traced core programs shared by the unit and acceptance suites. The
// expected bytes and stop reasons were worked out by hand; the suites also
// cross-check every row against oracle::run.

#include <cstdint>
#include <string>
#include <vector>

#include "bfgen/interp.hpp"

namespace traced {

struct Case {
    const char* name;
    std::string source;
    std::vector<std::uint8_t> input;
    std::vector<std::uint8_t> output;
    bfgen::Termination stop;
};

using bfgen::Termination;

inline std::vector<Case> cases() {
    return {
        {"echo", ",.", {65}, {65}, Termination::Completed},
        {"increment-print", "+.", {}, {1}, Termination::Completed},
        {"value-move loop", "++[->+<]>.", {}, {2}, Termination::Completed},
        {"decrement wraps to 255", "-.", {}, {255}, Termination::Completed},
        {"increment wraps to 0", ",+.", {255}, {0}, Termination::Completed},
        {"clear loop", "+++[-]+.", {}, {1}, Termination::Completed},
        {"inc then dec", "-+.", {}, {0}, Termination::Completed},
        {"second input wins", ",,.", {1, 2}, {2}, Termination::Completed},
        {"two cells", ",>,<.>.", {7, 9}, {7, 9}, Termination::Completed},
        {"8x8+1", "++++++++[>++++++++<-]>+.", {}, {65}, Termination::Completed},
        {"5x5x2", "+++++[>+++++<-]>[>++<-]>.", {}, {50}, Termination::Completed},
        {"sum of cells", "++>+++[<+>-]<.", {}, {5}, Termination::Completed},
        {"wrapping counter loop", "+[>+<+++]>.", {}, {85}, Termination::Completed},
        {"countdown", "+++++[.-]", {}, {5, 4, 3, 2, 1}, Termination::Completed},
        {"print to zero", "++[-.]", {}, {1, 0}, Termination::Completed},
        {"echo until zero", ",[.,]", {104, 105, 0}, {104, 105}, Termination::Completed},
        {"echo runs out of input", ",[.,]", {104, 105}, {104, 105}, Termination::InputExhausted},
        {"read with no input", ",", {}, {}, Termination::InputExhausted},
        {"output kept before exhaustion", "+.,.", {}, {1}, Termination::InputExhausted},
        {"pointer left without access", "<", {}, {}, Termination::Completed},
        {"pointer left then back", "<>+.", {}, {1}, Termination::Completed},
        {"access left of tape", "<+", {}, {}, Termination::Fault},
        {"output kept before escape", "+.<.", {}, {1}, Termination::Fault},
        {"walk off the left end", ">>>>+[<+]", {}, {}, Termination::Fault},
        {"walk off the right end", "+[>+]", {}, {}, Termination::Fault},
        {"unmatched ] on zero falls through", "].", {}, {0}, Termination::Completed},
        {"unmatched ] on nonzero", "+]", {}, {}, Termination::Fault},
        {"unmatched [ on zero ends program", "[.+.", {}, {}, Termination::Completed},
        {"unmatched [ on nonzero", "+[.", {}, {}, Termination::Fault},
        {"outer unmatched [ skipped", "[[].", {}, {}, Termination::Completed},
        {"empty loop never exits", "+[]", {}, {}, Termination::TickLimit},
        {"empty program", "", {}, {}, Termination::Completed},
    };
}

// Known programs for the tasks, verbatim.
inline const std::string kHello = "+-+-+>-<[++++>+++++<+<>++]>[-[---.--[[-.++++[+++..].]]]]";
inline const std::string kHi = "+[+++++-+>++>++-++++++<<]>++.[+.]-.,-#>>]<]";
inline const std::string kHelloWorld =
    "-><[>-<+++]->>++++[++++++++++++++++++<+]>.---.+-+++++++..+++.+>+<><+[+><><>+++++++++.+-<-+++"
    "+[++[.--------.+++.------],.-----]]";
inline const std::string kLoveHumans =
    "+[>+<+++]+>------------.+<+++++++++++++++++++++++++++++++.>+++++++++++++++++++++++++++++++"
    "+++.+++.+++++++.-----------------.--<.>--.+++++++++++..---<.>-.+++++++++++++.--------.---------"
    "---.+++++++++++++.+++++.";
inline const std::string kReverse = "+->,>,[>+,],,,,-<[.+<]";
inline const std::string kAdder = ",>,-[-<+>]<+.";
inline const std::string kSubtractor = ",-->,-[-<->]<+.";

// Hand-written reference solutions for catalog tasks without a known program.
inline const std::string kDouble = ",[->++<]>.";
inline const std::string kXor = ",>,[-<+>]<[->+<[->-<]]>.";
inline const std::string kFibonacci =
    ",>,>>>+["
    "<<<<[->>+>+<<<]>>>[-<<<+>>>]"   // c2 = c0, c0 restored
    "<<[->+>+<<]>>[-<<+>>]"          // c2 += c1, c1 restored
    "<."                             // print c2
    "<<[-]>[-<+>]>[-<+>]"            // c0 = c1, c1 = c2
    "<[->+>+<<]>>[-<<+>>]"           // c2 = copy of c1
    "<" + std::string(233, '-') +    // c2 -= 233
    ">>[-]<<[[-]>>+<<]>>"            // c4 = (last printed != 233)
    "]";
// c1..c3 flag the menu choice; each branch prints from its own scratch cell.
inline const std::string kIfThen =
    "," + std::string(49, '-') + ">+<[>-<->>+<<[>>-<<->>>+<<<]]" +
    ">[>>>" + std::string(104, '+') + ".+.<<<-]" +
    ">[>>" + std::string(122, '+') + ".<<-]" +
    ">[>>" + std::string(98, '+') + "." + std::string(23, '+') + "." + std::string(20, '-') + ".<<-]";

}  // namespace traced
