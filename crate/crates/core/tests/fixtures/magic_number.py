from typing import SupportsInt


class MagicNumber:
    def __init__(self, nr: int):
        self.remaining = nr

    def __int__(self):
        return self.remaining

def get_horcrux_nr(x: SupportsInt) -> str:
    return (f'There are {x} horcruxes remaining')

foo = MagicNumber(4)
print(get_horcrux_nr(foo))  # prints 'There are 4 horcruxes remaining'
