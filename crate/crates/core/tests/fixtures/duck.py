class Duck:
    def quack(self):
        return "Quack!"

class Donald:
    def quack(self):
        return "Nobody knows more about quacking than me."

def do_quack(x):
    print (x.quack())

duck = Duck()
do_quack(duck)  # OK
donald = Donald()
do_quack(donald)  # OK
