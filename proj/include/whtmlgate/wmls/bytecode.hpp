#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "whtmlgate/wmls/error.hpp"

namespace whtmlgate::wmls {

/// One-byte opcodes. Operands are little-endian u16; the jump operand is a
/// two's-complement offset from the end of the jump instruction.
enum class Opcode : std::uint8_t {
    ConstI = 0x01,  // idx  -> push integer constant
    ConstS = 0x02,  // idx  -> push string constant
    Load = 0x03,    // slot -> push local
    Store = 0x04,   // slot -> pop into local
    Add = 0x10,
    Sub = 0x11,
    Mul = 0x12,
    Div = 0x13,
    Mod = 0x14,
    Neg = 0x15,
    Eq = 0x20,
    Ne = 0x21,
    Lt = 0x22,
    Le = 0x23,
    Gt = 0x24,
    Ge = 0x25,
    Not = 0x26,
    Jmp = 0x30,   // rel16
    Jz = 0x31,    // rel16, pops the condition
    Call = 0x40,  // function index
    Ret = 0x41,
    Pop = 0x42,
};

/// Size in bytes of the instruction starting with `op`, or 0 if unknown.
std::size_t instruction_size(std::uint8_t op) noexcept;

using Constant = std::variant<std::int64_t, std::string>;

struct Function {
    std::string name;
    std::uint8_t arity = 0;
    std::uint8_t local_count = 0;  // includes parameters
    std::vector<std::uint8_t> code;

    friend bool operator==(const Function&, const Function&) = default;
};

struct BytecodeModule {
    std::vector<Constant> constants;
    std::vector<Function> functions;

    /// Index of the function called `name`, or -1.
    int find_function(std::string_view name) const noexcept;

    friend bool operator==(const BytecodeModule&, const BytecodeModule&) = default;
};

inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kMaxOperandStack = 1024;

/// The `.wbc` wire format:
///   "WBC1" | version u8 | flags u16 (=0) | const_count u16 | constants |
///   func_count u16 | functions
/// constant: tag u8 (0 = i64, 1 = u16 length + UTF-8 bytes)
/// function: u16 length + UTF-8 name | arity u8 | local_count u8 |
///           code_len u16 | code
std::vector<std::uint8_t> encode_module(const BytecodeModule& module);

/// Parses then verifies. Throws FormatError or VerifyError.
BytecodeModule decode_module(std::span<const std::uint8_t> bytes);

/// Checks every invariant the VM relies on:
///   - unique, non-empty function names; arity <= local_count
///   - known opcodes with complete operands
///   - constant indices in range and of the right kind, local slots in range,
///     call targets in range
///   - jump targets on instruction boundaries inside the function
///   - a consistent operand stack height at every reachable instruction,
///     never below what the instruction pops and never above kMaxOperandStack
/// Throws VerifyError.
void verify(const BytecodeModule& module);

/// Human-readable listing, one instruction per line.
std::string disassemble(const BytecodeModule& module);

}  // namespace whtmlgate::wmls
