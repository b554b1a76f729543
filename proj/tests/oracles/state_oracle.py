"""Independent reimplementation of the state commitment, block-free.

Used once to freeze golden constants in tests/unit/test_state.cpp and
tests/unit/test_chain.cpp. Run: python3 tests/oracles/state_oracle.py
"""
import hashlib


def H(b: bytes) -> bytes:
    return hashlib.sha256(b).digest()


def merkle_root(leaves):
    if not leaves:
        return H(b"\x00")
    level = list(leaves)
    while len(level) > 1:
        if len(level) % 2:
            level.append(level[-1])
        level = [H(level[i] + level[i + 1]) for i in range(0, len(level), 2)]
    return level[0]


def storage_root(storage):
    return merkle_root([H(k.to_bytes(32, "big") + v.to_bytes(32, "big"))
                        for k, v in sorted(storage.items()) if v])


def leaf(addr: bytes, nonce, balance, storage, code: bytes):
    return H(addr + nonce.to_bytes(8, "big") + balance.to_bytes(32, "big")
             + storage_root(storage) + H(code))


def state_root(accounts):
    leaves = [leaf(a, *acct) for a, acct in sorted(accounts.items())
              if acct != (0, 0, {}, b"")]
    return merkle_root(leaves)


def addr_id(i):
    return i.to_bytes(20, "big")


if __name__ == "__main__":
    print("empty_root", state_root({}).hex())
    fixture = {
        addr_id(1): (0, 100, {}, b""),
        addr_id(2): (1, 200, {}, b""),
        addr_id(3): (2, 300, {1: 7, 2: 9}, b""),
        addr_id(4): (3, 400, {}, b"\x00"),
    }
    print("four_account_root", state_root(fixture).hex())
    single = {addr_id(1): (0, 100, {}, b"")}
    print("single_account_root", state_root(single).hex())
    # derive_address(0x11..11, 0): last 20 bytes of H(sender || nonce_be8)
    sender = bytes([0x11] * 20)
    print("derive_address_11_0", H(sender + (0).to_bytes(8, "big"))[12:].hex())
    print("selector_transfer", H(b"transfer(address,uint256)")[:4].hex())
    print("transfer_topic", H(b"Transfer(address,address,uint256)").hex())
